#pragma once

#include <map>
#include <string>
#include <vector>

#include "confweave/ast.hpp"
#include "confweave/solver.hpp"

namespace confweave {

// Brute-force semantic evaluator. Interprets the component language
// directly on the ASTs -- no symbol table, no constraint model -- and
// enumerates every total choice of implementations over active paths,
// keeping exactly those where all subsetof/accepts checks hold. Used as
// independent ground truth for the encoder/solver pipeline. Exponential;
// meant for small inputs only.
std::vector<Configuration> enumerate_configurations(const ComponentLibrary& library,
                                                    const ProblemSpec& problem,
                                                    int depthLimit = 4);

// Sorts configurations the way a static-order depth-first search visits
// solutions: requirement paths in `varOrder` first (unmentioned paths
// follow in declaration order), values ranked by position in the
// per-path preference list (implementation names), then by library
// declaration order, with "inactive" ranked as code 0. The head of the
// sorted list is the solution such a search finds first.
void sort_configurations(const ComponentLibrary& library, const ProblemSpec& problem,
                         std::vector<Configuration>& configs,
                         const std::vector<std::string>& varOrder = {},
                         const std::map<std::string, std::vector<std::string>>& valuePrefs = {},
                         int depthLimit = 4);

} // namespace confweave
