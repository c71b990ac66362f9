#include "confweave/printer.hpp"

#include <sstream>

namespace confweave {
namespace {

void join(std::ostringstream& os, const std::vector<std::string>& items) {
    for (size_t i = 0; i < items.size(); ++i) {
        if (i) os << ", ";
        os << items[i];
    }
}

void print_setexpr(std::ostringstream& os, const SetExpr& se) {
    if (se.kind == SetExpr::Kind::Literal) {
        if (se.items.empty()) {
            os << "{ }";
        } else {
            os << "{ ";
            join(os, se.items);
            os << " }";
        }
        return;
    }
    os << se.entity.joined() << '.'
       << (se.select == SetKind::Properties ? "properties" : "provides");
}

} // namespace

std::string render_check(const Check& c) {
    std::ostringstream os;
    if (const auto* sc = std::get_if<SubsetCheck>(&c.node)) {
        print_setexpr(os, sc->lhs);
        os << " subsetof ";
        print_setexpr(os, sc->rhs);
    } else {
        const auto& ac = std::get<AcceptsCheck>(c.node);
        os << ac.slot.joined() << " accepts " << ac.candidate.joined();
        if (!ac.withProperties.empty()) {
            os << " with { ";
            join(os, ac.withProperties);
            os << " }";
        }
    }
    return os.str();
}

std::string pretty_print(const ComponentLibrary& lib) {
    std::ostringstream os;
    bool first = true;
    for (const auto& t : lib.templates) {
        if (!first) os << '\n';
        first = false;
        os << "template " << t.name << '(';
        join(os, t.params);
        os << ") {\n";
        if (!t.provides.empty()) {
            os << "  provides ";
            join(os, t.provides);
            os << ";\n";
        }
        if (!t.properties.empty()) {
            os << "  properties ";
            join(os, t.properties);
            os << ";\n";
        }
        for (const auto& r : t.requirements)
            os << "  requires " << r.facility << ' ' << r.name << ";\n";
        for (const auto& c : t.checks) os << "  check " << render_check(c) << ";\n";
        os << "}\n";
    }
    return os.str();
}

std::string pretty_print(const ProblemSpec& problem) {
    std::ostringstream os;
    os << "problem " << problem.name << " {\n";
    for (const auto& r : problem.requirements)
        os << "  requires " << r.facility << ' ' << r.name << ";\n";
    for (const auto& c : problem.checks) os << "  check " << render_check(c) << ";\n";
    os << "}\n";
    return os.str();
}

} // namespace confweave
