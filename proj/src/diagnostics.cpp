#include "confweave/diagnostics.hpp"

#include <algorithm>
#include <sstream>

namespace confweave {

bool has_errors(const std::vector<Diagnostic>& diags) {
    return std::any_of(diags.begin(), diags.end(),
                       [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

std::string render(const Diagnostic& d) {
    std::ostringstream os;
    os << d.file << ':' << d.span.line << ':' << d.span.column << ": "
       << (d.severity == Severity::Error ? "error" : "warning") << ": " << d.message;
    return os.str();
}

} // namespace confweave
