#pragma once

#include <string>

#include "confweave/ast.hpp"

namespace confweave {

// Canonical source rendering; parse(pretty_print(x)) is structurally
// identical to x.
std::string pretty_print(const ComponentLibrary& library);
std::string pretty_print(const ProblemSpec& problem);

// One check in canonical source form, without the leading keyword,
// e.g. "{ a } subsetof x.properties". Used in constraint provenance.
std::string render_check(const Check& check);

} // namespace confweave
