#include "confweave/report.hpp"

#include <json.hpp>

#include "confweave/errors.hpp"

namespace confweave {

std::string emit_report(const std::vector<Configuration>& configurations) {
    nlohmann::ordered_json root = nlohmann::ordered_json::array();
    for (const auto& cfg : configurations) {
        nlohmann::ordered_json entry = nlohmann::ordered_json::array();
        for (const auto& [path, impl] : cfg)
            entry.push_back({{"path", path}, {"implementation", impl}});
        root.push_back(std::move(entry));
    }
    root.push_back({{"count", configurations.size()}});
    return root.dump(2) + "\n";
}

std::vector<Configuration> parse_report(std::string_view json) {
    nlohmann::json root;
    try {
        root = nlohmann::json::parse(json);
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("malformed report: ") + e.what());
    }
    if (!root.is_array() || root.empty())
        throw Error("malformed report: expected a non-empty top-level array");
    const auto& summary = root.back();
    if (!summary.is_object() || !summary.contains("count") ||
        !summary["count"].is_number_unsigned())
        throw Error("malformed report: final element must be a {\"count\": N} object");
    size_t count = summary["count"].get<size_t>();
    if (count != root.size() - 1)
        throw Error("report count " + std::to_string(count) + " does not match " +
                    std::to_string(root.size() - 1) + " configurations");

    std::vector<Configuration> out;
    for (size_t i = 0; i + 1 < root.size(); ++i) {
        const auto& entry = root.at(i);
        if (!entry.is_array()) throw Error("malformed report: configuration must be an array");
        Configuration cfg;
        for (const auto& binding : entry) {
            if (!binding.is_object() || !binding.contains("path") ||
                !binding.contains("implementation") || !binding["path"].is_string() ||
                !binding["implementation"].is_string())
                throw Error("malformed report: binding must be a {path, implementation} object");
            auto [it, inserted] = cfg.emplace(binding["path"].get<std::string>(),
                                              binding["implementation"].get<std::string>());
            if (!inserted) throw Error("malformed report: duplicate path '" + it->first + "'");
        }
        out.push_back(std::move(cfg));
    }
    return out;
}

} // namespace confweave
