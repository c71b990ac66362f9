#include "confweave/token.hpp"

#include <cctype>
#include <map>

namespace confweave {

const char* token_kind_name(TokenKind k) {
    switch (k) {
    case TokenKind::Ident: return "identifier";
    case TokenKind::KwTemplate: return "'template'";
    case TokenKind::KwProblem: return "'problem'";
    case TokenKind::KwProvides: return "'provides'";
    case TokenKind::KwProperties: return "'properties'";
    case TokenKind::KwRequires: return "'requires'";
    case TokenKind::KwCheck: return "'check'";
    case TokenKind::KwSubsetof: return "'subsetof'";
    case TokenKind::KwAccepts: return "'accepts'";
    case TokenKind::KwWith: return "'with'";
    case TokenKind::LParen: return "'('";
    case TokenKind::RParen: return "')'";
    case TokenKind::LBrace: return "'{'";
    case TokenKind::RBrace: return "'}'";
    case TokenKind::Comma: return "','";
    case TokenKind::Semi: return "';'";
    case TokenKind::Dot: return "'.'";
    }
    return "?";
}

namespace {

const std::map<std::string, TokenKind, std::less<>> kKeywords = {
    {"template", TokenKind::KwTemplate},   {"problem", TokenKind::KwProblem},
    {"provides", TokenKind::KwProvides},   {"properties", TokenKind::KwProperties},
    {"requires", TokenKind::KwRequires},   {"check", TokenKind::KwCheck},
    {"subsetof", TokenKind::KwSubsetof},   {"accepts", TokenKind::KwAccepts},
    {"with", TokenKind::KwWith},
};

bool ident_start(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}
bool ident_char(char c) { return ident_start(c) || (c >= '0' && c <= '9'); }

} // namespace

LexResult tokenize(std::string_view text, std::string_view file) {
    LexResult res;
    size_t i = 0;
    int line = 1, col = 1;

    auto advance = [&](size_t n) {
        for (size_t k = 0; k < n; ++k) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
            ++i;
        }
    };

    while (i < text.size()) {
        char c = text[i];
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            advance(1);
            continue;
        }
        if (c == '/' && i + 1 < text.size() && text[i + 1] == '/') {
            while (i < text.size() && text[i] != '\n') advance(1);
            continue;
        }
        SourceSpan span{line, col, 1};
        TokenKind kind;
        switch (c) {
        case '(': kind = TokenKind::LParen; break;
        case ')': kind = TokenKind::RParen; break;
        case '{': kind = TokenKind::LBrace; break;
        case '}': kind = TokenKind::RBrace; break;
        case ',': kind = TokenKind::Comma; break;
        case ';': kind = TokenKind::Semi; break;
        case '.': kind = TokenKind::Dot; break;
        default:
            if (ident_start(c)) {
                size_t start = i;
                while (i < text.size() && ident_char(text[i])) advance(1);
                std::string word(text.substr(start, i - start));
                span.length = static_cast<int>(word.size());
                auto kw = kKeywords.find(word);
                res.tokens.push_back(
                    {kw != kKeywords.end() ? kw->second : TokenKind::Ident, word, span});
                continue;
            }
            res.diagnostics.push_back({Severity::Error,
                                       std::string("illegal character '") + c + "'",
                                       std::string(file), span});
            advance(1);
            continue;
        }
        res.tokens.push_back({kind, std::string(1, c), span});
        advance(1);
    }
    return res;
}

} // namespace confweave
