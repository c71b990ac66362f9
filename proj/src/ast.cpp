#include "confweave/ast.hpp"

#include <algorithm>

namespace confweave {

std::string EntityRef::joined() const {
    std::string out;
    for (size_t i = 0; i < path.size(); ++i) {
        if (i) out += '.';
        out += path[i];
    }
    return out;
}

bool Template::has_param(const std::string& p) const {
    return std::find(params.begin(), params.end(), p) != params.end();
}

const Requirement* Template::find_requirement(const std::string& local) const {
    for (const auto& r : requirements)
        if (r.name == local) return &r;
    return nullptr;
}

const Template* ComponentLibrary::find_template(const std::string& name) const {
    for (const auto& t : templates)
        if (t.name == name) return &t;
    return nullptr;
}

const Requirement* ProblemSpec::find_requirement(const std::string& name) const {
    for (const auto& r : requirements)
        if (r.name == name) return &r;
    return nullptr;
}

bool same_structure(const EntityRef& a, const EntityRef& b) { return a.path == b.path; }

bool same_structure(const SetExpr& a, const SetExpr& b) {
    if (a.kind != b.kind) return false;
    if (a.kind == SetExpr::Kind::Literal) return a.items == b.items;
    return same_structure(a.entity, b.entity) && a.select == b.select;
}

bool same_structure(const Check& a, const Check& b) {
    if (a.node.index() != b.node.index()) return false;
    if (const auto* sa = std::get_if<SubsetCheck>(&a.node)) {
        const auto& sb = std::get<SubsetCheck>(b.node);
        return same_structure(sa->lhs, sb.lhs) && same_structure(sa->rhs, sb.rhs);
    }
    const auto& aa = std::get<AcceptsCheck>(a.node);
    const auto& ab = std::get<AcceptsCheck>(b.node);
    return same_structure(aa.slot, ab.slot) && same_structure(aa.candidate, ab.candidate) &&
           aa.withProperties == ab.withProperties;
}

bool same_structure(const Requirement& a, const Requirement& b) {
    return a.facility == b.facility && a.name == b.name;
}

namespace {
template <class T, class Eq>
bool same_vec(const std::vector<T>& a, const std::vector<T>& b, Eq eq) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (!eq(a[i], b[i])) return false;
    return true;
}
} // namespace

bool same_structure(const Template& a, const Template& b) {
    return a.name == b.name && a.params == b.params && a.provides == b.provides &&
           a.properties == b.properties &&
           same_vec(a.requirements, b.requirements,
                    [](const Requirement& x, const Requirement& y) { return same_structure(x, y); }) &&
           same_vec(a.checks, b.checks,
                    [](const Check& x, const Check& y) { return same_structure(x, y); });
}

bool same_structure(const ComponentLibrary& a, const ComponentLibrary& b) {
    return same_vec(a.templates, b.templates,
                    [](const Template& x, const Template& y) { return same_structure(x, y); });
}

bool same_structure(const ProblemSpec& a, const ProblemSpec& b) {
    return a.name == b.name &&
           same_vec(a.requirements, b.requirements,
                    [](const Requirement& x, const Requirement& y) { return same_structure(x, y); }) &&
           same_vec(a.checks, b.checks,
                    [](const Check& x, const Check& y) { return same_structure(x, y); });
}

} // namespace confweave
