#pragma once

#include <string_view>

#include "confweave/ast.hpp"
#include "confweave/diagnostics.hpp"

namespace confweave {

struct ParseLibraryResult {
    ComponentLibrary library;
    std::vector<Diagnostic> diagnostics;
};

struct ParseProblemResult {
    ProblemSpec problem;
    std::vector<Diagnostic> diagnostics;
};

// Parses a component library. Recovers at `;` and `}` so several
// diagnostics can surface in one run; templates that parse cleanly are
// kept even when earlier ones had errors.
ParseLibraryResult parse_library(std::string_view text, std::string_view file = "<input>");

// Parses a problem meta-component (a single `problem` block).
ParseProblemResult parse_problem(std::string_view text, std::string_view file = "<input>");

} // namespace confweave
