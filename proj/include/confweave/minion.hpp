#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "confweave/diagnostics.hpp"
#include "confweave/model.hpp"
#include "confweave/solver.hpp"

namespace confweave {

// Serializes the model in the Minion 3 text format: discrete variables
// for the component choices, 0/1 discretes for the auxiliary bits and
// channelling variables, watched-or reification for the membership
// constraints and the reify/reifyimply pair for every guarded
// obligation. Deterministic bytes, "\n" line endings. Throws
// EmptyModelError when the model has no variables.
std::string emit_minion(const ConfigCsp& csp);

// Syntax checker for the Minion 3 subset this project emits: section
// order, declarations before use, the allowed constraint vocabulary and
// argument shapes. Returns diagnostics; empty means the text is valid.
std::vector<Diagnostic> check_minion_syntax(std::string_view text);

// Minion variable name used for a component path (path characters that
// Minion identifiers do not allow are rewritten deterministically).
std::string minion_var_name(const ConfigCsp& csp, int var);

// Decodes the first `Sol:` line of an external Minion run back into an
// assignment (auxiliary bits derived from the decoded codes). Returns
// nullopt if no solution line is present.
std::optional<Assignment> parse_minion_solution(const ConfigCsp& csp, std::string_view output);

} // namespace confweave
