#pragma once

#include <string>
#include <vector>

#include "confweave/diagnostics.hpp"

namespace confweave {

enum class TokenKind {
    Ident,
    KwTemplate,
    KwProblem,
    KwProvides,
    KwProperties,
    KwRequires,
    KwCheck,
    KwSubsetof,
    KwAccepts,
    KwWith,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Semi,
    Dot,
};

const char* token_kind_name(TokenKind k);

struct Token {
    TokenKind kind;
    std::string text;
    SourceSpan span;
};

struct LexResult {
    std::vector<Token> tokens;
    std::vector<Diagnostic> diagnostics;
};

// Splits the input into tokens. Whitespace and //-comments are skipped;
// every token carries the span it was read from. Illegal characters
// produce an error diagnostic and are skipped, lexing continues.
LexResult tokenize(std::string_view text, std::string_view file = "<input>");

} // namespace confweave
