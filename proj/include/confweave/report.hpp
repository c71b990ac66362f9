#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "confweave/solver.hpp"

namespace confweave {

// JSON rendering of a list of configurations: one array per
// configuration holding {path, implementation} objects sorted by path,
// followed by a {"count": N} summary object. Stable key order,
// deterministic bytes.
std::string emit_report(const std::vector<Configuration>& configurations);

// Inverse of emit_report. Throws Error on malformed input or a count
// mismatch.
std::vector<Configuration> parse_report(std::string_view json);

} // namespace confweave
