#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace confweave {

// Runs the command line given argv-style arguments (without the program
// name). Results go to `out`, diagnostics to `err` in
// `file:line:col: severity: message` form.
// Exit codes: 0 success/Sat, 1 Unsat, 2 diagnostic errors, 3 usage errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace confweave
