#pragma once

#include <string>
#include <vector>

namespace confweave {

enum class Severity { Warning, Error };

// Line and column are 1-based; length is in bytes.
struct SourceSpan {
    int line = 0;
    int column = 0;
    int length = 0;
};

struct Diagnostic {
    Severity severity = Severity::Error;
    std::string message;
    std::string file;
    SourceSpan span;
};

bool has_errors(const std::vector<Diagnostic>& diags);

// "file:line:col: severity: message" -- the form the CLI prints on stderr.
std::string render(const Diagnostic& d);

} // namespace confweave
