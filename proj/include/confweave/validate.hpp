#pragma once

#include <vector>

#include "confweave/ast.hpp"
#include "confweave/diagnostics.hpp"

namespace confweave {

// Cross-reference checks over an already parsed pair:
//  - every required facility has at least one providing template (error,
//    the corresponding variable domain would be empty),
//  - accepts slots name a parameter of at least one candidate (error),
//  - a subsetof has exactly one literal side (error),
//  - requirement cycles through the library (warning with the cycle path),
//  - templates whose provides are never required (warning).
std::vector<Diagnostic> validate(const ComponentLibrary& library, const ProblemSpec& problem);

} // namespace confweave
