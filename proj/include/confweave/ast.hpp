#pragma once

#include <string>
#include <variant>
#include <vector>

#include "confweave/diagnostics.hpp"

namespace confweave {

// A dotted entity reference, e.g. `pvw` or `sum.first`. What it may
// resolve to depends on where it appears: problem requirements, template
// sub-requirements and template parameters are the only entities.
struct EntityRef {
    std::vector<std::string> path;
    SourceSpan span;

    std::string joined() const;
};

enum class SetKind { Properties, Provides };

// Either a literal identifier set `{ a, b }` or an entity set reference
// `x.properties` / `x.provides`.
struct SetExpr {
    enum class Kind { Literal, EntitySet };
    Kind kind = Kind::Literal;
    std::vector<std::string> items; // Literal
    EntityRef entity;               // EntitySet
    SetKind select = SetKind::Properties;
    SourceSpan span;
};

struct SubsetCheck {
    SetExpr lhs;
    SetExpr rhs;
};

struct AcceptsCheck {
    EntityRef slot;      // requirement.parameter
    EntityRef candidate; // requirement
    std::vector<std::string> withProperties;
};

struct Check {
    std::variant<SubsetCheck, AcceptsCheck> node;
    SourceSpan span;
};

struct Requirement {
    std::string facility;
    std::string name;
    SourceSpan span;
};

struct Template {
    std::string name;
    std::vector<std::string> params;
    std::vector<std::string> provides;
    std::vector<std::string> properties;
    std::vector<Requirement> requirements;
    std::vector<Check> checks;
    SourceSpan span;

    bool has_param(const std::string& p) const;
    const Requirement* find_requirement(const std::string& local) const;
};

struct ComponentLibrary {
    std::vector<Template> templates;
    std::string file; // source file of the (first) library, for messages

    const Template* find_template(const std::string& name) const;
};

struct ProblemSpec {
    std::string name;
    std::vector<Requirement> requirements;
    std::vector<Check> checks;
    SourceSpan span;
    std::string file;

    const Requirement* find_requirement(const std::string& name) const;
};

// Structural equality, ignoring source spans and file names. Used by the
// pretty-print round-trip tests.
bool same_structure(const EntityRef& a, const EntityRef& b);
bool same_structure(const SetExpr& a, const SetExpr& b);
bool same_structure(const Check& a, const Check& b);
bool same_structure(const Requirement& a, const Requirement& b);
bool same_structure(const Template& a, const Template& b);
bool same_structure(const ComponentLibrary& a, const ComponentLibrary& b);
bool same_structure(const ProblemSpec& a, const ProblemSpec& b);

} // namespace confweave
