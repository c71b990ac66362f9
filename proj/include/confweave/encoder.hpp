#pragma once

#include <map>
#include <string>
#include <vector>

#include "confweave/ast.hpp"
#include "confweave/model.hpp"

namespace confweave {

constexpr int kDefaultDepthLimit = 4;

// Templates whose provides set contains `facility`, in declaration order.
std::vector<const Template*> candidate_implementations(const ComponentLibrary& library,
                                                       const std::string& facility);

// Integer mapping for implementations, properties and facilities,
// collected from the library in declaration order.
SymbolTable build_symbols(const ComponentLibrary& library);

// The full list of component variables: one per problem requirement, then
// recursively one per (variable, candidate-with-sub-requirements,
// sub-requirement). Throws DepthExceededError when a chain would exceed
// depthLimit (cyclic or too-deep library).
std::vector<ComponentVar> expand(const ComponentLibrary& library, const ProblemSpec& problem,
                                 int depthLimit = kDefaultDepthLimit);

// Compiles a validated (library, problem) pair into the constraint model.
// Precondition: validate() reported no errors.
ConfigCsp encode(const ComponentLibrary& library, const ProblemSpec& problem,
                 int depthLimit = kDefaultDepthLimit);

// Moves the named variables to the front of the search order and applies
// per-variable value preferences; everything unmentioned keeps
// declaration/code order. Throws UnknownVariableError or
// InvalidPreferenceError.
ConfigCsp set_search_order(ConfigCsp csp, const std::vector<std::string>& varOrder,
                           const std::map<std::string, std::vector<int>>& valuePrefs);

} // namespace confweave
