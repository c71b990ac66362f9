#include "confweave/model.hpp"

namespace confweave {

int SymbolTable::code_of(const std::string& impl) const {
    auto it = implCode.find(impl);
    return it == implCode.end() ? -1 : it->second;
}

const std::string& SymbolTable::impl_name(int code) const {
    return implementations.at(static_cast<size_t>(code - 1));
}

int SymbolTable::property_of(const std::string& name) const {
    auto it = propertyIndex.find(name);
    return it == propertyIndex.end() ? -1 : it->second;
}

int SymbolTable::facility_of(const std::string& name) const {
    auto it = facilityIndex.find(name);
    return it == facilityIndex.end() ? -1 : it->second;
}

bool SymbolTable::operator==(const SymbolTable& o) const {
    return implementations == o.implementations && properties == o.properties &&
           facilities == o.facilities;
}

int ConfigCsp::var_of(const std::string& path) const {
    auto it = varIndex.find(path);
    return it == varIndex.end() ? -1 : it->second;
}

bool ConfigCsp::operator==(const ConfigCsp& o) const {
    return symbols == o.symbols && vars == o.vars && channelCount == o.channelCount &&
           constraints == o.constraints && search == o.search;
}

} // namespace confweave
