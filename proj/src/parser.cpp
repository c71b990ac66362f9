#include "confweave/parser.hpp"

#include <set>

#include "confweave/token.hpp"

namespace confweave {
namespace {

// Recursive descent over the token list. Recovery is panic-mode: on a
// syntax error we skip to the next ';' (consuming it) or '}' (leaving it
// for the enclosing loop), so later clauses still produce diagnostics.
struct Parser {
    const std::vector<Token>& toks;
    std::string file;
    std::vector<Diagnostic>& diags;
    size_t pos = 0;

    const Token* cur() const { return pos < toks.size() ? &toks[pos] : nullptr; }
    const Token* peek(size_t n) const { return pos + n < toks.size() ? &toks[pos + n] : nullptr; }
    bool at(TokenKind k) const { return cur() && cur()->kind == k; }

    SourceSpan here() const {
        if (cur()) return cur()->span;
        if (!toks.empty()) return toks.back().span;
        return {1, 1, 0};
    }

    void error(const std::string& msg, SourceSpan span) {
        diags.push_back({Severity::Error, msg, file, span});
    }
    void error(const std::string& msg) { error(msg, here()); }
    void warning(const std::string& msg, SourceSpan span) {
        diags.push_back({Severity::Warning, msg, file, span});
    }

    bool accept(TokenKind k) {
        if (!at(k)) return false;
        ++pos;
        return true;
    }

    const Token* expect(TokenKind k, const char* what) {
        if (at(k)) return &toks[pos++];
        error(std::string("expected ") + what + (cur() ? std::string(", got ") + token_kind_name(cur()->kind)
                                                       : std::string(", got end of input")));
        return nullptr;
    }

    // Skip to just past the next ';', or stop before '}' / end of input.
    void sync() {
        while (cur()) {
            if (accept(TokenKind::Semi)) return;
            if (at(TokenKind::RBrace)) return;
            ++pos;
        }
    }

    std::vector<std::string> identlist() {
        std::vector<std::string> out;
        const Token* t = expect(TokenKind::Ident, "identifier");
        if (!t) return out;
        out.push_back(t->text);
        while (accept(TokenKind::Comma)) {
            t = expect(TokenKind::Ident, "identifier");
            if (!t) break;
            out.push_back(t->text);
        }
        return out;
    }

    // IDENT ("." IDENT)*; stops before ".properties" / ".provides".
    bool entref(EntityRef& out) {
        const Token* t = expect(TokenKind::Ident, "identifier");
        if (!t) return false;
        out.span = t->span;
        out.path.push_back(t->text);
        while (at(TokenKind::Dot)) {
            const Token* n = peek(1);
            if (n && (n->kind == TokenKind::KwProperties || n->kind == TokenKind::KwProvides))
                break;
            ++pos; // '.'
            t = expect(TokenKind::Ident, "identifier");
            if (!t) return false;
            out.path.push_back(t->text);
        }
        return true;
    }

    bool setexpr(SetExpr& out) {
        out.span = here();
        if (accept(TokenKind::LBrace)) {
            out.kind = SetExpr::Kind::Literal;
            if (!at(TokenKind::RBrace)) out.items = identlist();
            return expect(TokenKind::RBrace, "'}'") != nullptr;
        }
        out.kind = SetExpr::Kind::EntitySet;
        if (!entref(out.entity)) return false;
        if (accept(TokenKind::Dot)) {
            if (accept(TokenKind::KwProperties)) {
                out.select = SetKind::Properties;
                return true;
            }
            if (accept(TokenKind::KwProvides)) {
                out.select = SetKind::Provides;
                return true;
            }
        }
        error("expected '.properties' or '.provides' after entity reference", out.entity.span);
        return false;
    }

    bool check(Check& out) {
        out.span = here();
        if (at(TokenKind::LBrace)) {
            SubsetCheck sc;
            if (!setexpr(sc.lhs)) return false;
            if (!expect(TokenKind::KwSubsetof, "'subsetof'")) return false;
            if (!setexpr(sc.rhs)) return false;
            out.node = std::move(sc);
            return true;
        }
        EntityRef first;
        if (!entref(first)) return false;
        if (at(TokenKind::Dot)) { // entity set reference, must be a subsetof
            SubsetCheck sc;
            sc.lhs.kind = SetExpr::Kind::EntitySet;
            sc.lhs.entity = first;
            sc.lhs.span = first.span;
            ++pos; // '.'
            if (accept(TokenKind::KwProperties))
                sc.lhs.select = SetKind::Properties;
            else if (accept(TokenKind::KwProvides))
                sc.lhs.select = SetKind::Provides;
            else {
                error("expected 'properties' or 'provides'");
                return false;
            }
            if (!expect(TokenKind::KwSubsetof, "'subsetof'")) return false;
            if (!setexpr(sc.rhs)) return false;
            out.node = std::move(sc);
            return true;
        }
        if (accept(TokenKind::KwAccepts)) {
            AcceptsCheck ac;
            ac.slot = first;
            if (!entref(ac.candidate)) return false;
            if (accept(TokenKind::KwWith)) {
                if (!expect(TokenKind::LBrace, "'{'")) return false;
                ac.withProperties = identlist();
                if (!expect(TokenKind::RBrace, "'}'")) return false;
            }
            out.node = std::move(ac);
            return true;
        }
        if (at(TokenKind::KwSubsetof)) {
            error("left side of 'subsetof' must be a literal set or end in '.properties'/'.provides'",
                  first.span);
            return false;
        }
        error("expected 'subsetof' or 'accepts'");
        return false;
    }

    // Section ranks inside a template body; the grammar fixes the order
    // provides, properties, requires*, check*.
    enum Section { SecStart = 0, SecProvides, SecProperties, SecRequires, SecCheck };

    bool template_decl(Template& out) {
        const Token* name = expect(TokenKind::Ident, "template name");
        if (!name) return false;
        out.name = name->text;
        out.span = name->span;
        if (!expect(TokenKind::LParen, "'('")) return false;
        if (!at(TokenKind::RParen)) out.params = identlist();
        if (!expect(TokenKind::RParen, "')'")) return false;
        if (!expect(TokenKind::LBrace, "'{'")) return false;

        int section = SecStart;
        bool sawProvides = false, sawProperties = false;
        while (cur() && !at(TokenKind::RBrace)) {
            SourceSpan clauseSpan = here();
            if (accept(TokenKind::KwProvides)) {
                if (sawProvides) error("duplicate 'provides' clause", clauseSpan);
                if (section > SecProvides)
                    error("'provides' clause must come first in the template body", clauseSpan);
                auto ids = identlist();
                out.provides.insert(out.provides.end(), ids.begin(), ids.end());
                sawProvides = true;
                section = std::max(section, int(SecProvides));
                if (!expect(TokenKind::Semi, "';'")) sync();
            } else if (accept(TokenKind::KwProperties)) {
                if (sawProperties) error("duplicate 'properties' clause", clauseSpan);
                if (section > SecProperties)
                    error("'properties' clause must precede 'requires' and 'check' clauses",
                          clauseSpan);
                auto ids = identlist();
                out.properties.insert(out.properties.end(), ids.begin(), ids.end());
                sawProperties = true;
                section = std::max(section, int(SecProperties));
                if (!expect(TokenKind::Semi, "';'")) sync();
            } else if (accept(TokenKind::KwRequires)) {
                if (section > SecRequires)
                    error("'requires' clauses must precede 'check' clauses", clauseSpan);
                const Token* fac = expect(TokenKind::Ident, "facility name");
                const Token* local = fac ? expect(TokenKind::Ident, "requirement name") : nullptr;
                if (fac && local) out.requirements.push_back({fac->text, local->text, fac->span});
                section = std::max(section, int(SecRequires));
                if (!expect(TokenKind::Semi, "';'")) sync();
            } else if (accept(TokenKind::KwCheck)) {
                Check c;
                section = SecCheck;
                if (check(c)) {
                    out.checks.push_back(std::move(c));
                    if (!expect(TokenKind::Semi, "';'")) sync();
                } else {
                    sync();
                }
            } else {
                error("expected 'provides', 'properties', 'requires' or 'check'");
                sync();
            }
        }
        if (!expect(TokenKind::RBrace, "'}'")) return false;
        if (!sawProvides)
            error("template '" + out.name + "' has no 'provides' clause", out.span);
        return true;
    }

    // Every entity reference must resolve inside its declaring scope:
    // parameters and sub-requirements in a template, requirement names in
    // a problem. Unresolvable checks are dropped after diagnosing them.
    void resolve_checks(std::vector<Check>& checks, const std::set<std::string>& params,
                        const std::set<std::string>& reqs) {
        std::vector<Check> kept;
        for (auto& c : checks) {
            bool ok = true;
            auto resolveSetEntity = [&](const SetExpr& se) {
                if (se.kind != SetExpr::Kind::EntitySet) return;
                if (se.entity.path.size() != 1) {
                    error("set reference '" + se.entity.joined() +
                              "' must name a single requirement or parameter",
                          se.entity.span);
                    ok = false;
                    return;
                }
                const std::string& n = se.entity.path[0];
                if (!reqs.count(n) && !params.count(n)) {
                    error("cannot resolve '" + n + "'", se.entity.span);
                    ok = false;
                }
            };
            if (auto* sc = std::get_if<SubsetCheck>(&c.node)) {
                resolveSetEntity(sc->lhs);
                resolveSetEntity(sc->rhs);
            } else {
                auto& ac = std::get<AcceptsCheck>(c.node);
                if (ac.slot.path.size() != 2) {
                    error("accepts slot '" + ac.slot.joined() +
                              "' must be of the form requirement.parameter",
                          ac.slot.span);
                    ok = false;
                } else if (!reqs.count(ac.slot.path[0])) {
                    if (params.count(ac.slot.path[0]))
                        error("accepts slot owner '" + ac.slot.path[0] +
                                  "' must be a requirement, not a parameter",
                              ac.slot.span);
                    else
                        error("cannot resolve '" + ac.slot.path[0] + "'", ac.slot.span);
                    ok = false;
                }
                if (ac.candidate.path.size() != 1) {
                    error("accepts candidate '" + ac.candidate.joined() +
                              "' must name a single requirement",
                          ac.candidate.span);
                    ok = false;
                } else if (!reqs.count(ac.candidate.path[0])) {
                    if (params.count(ac.candidate.path[0]))
                        error("accepts candidate '" + ac.candidate.path[0] +
                                  "' must be a requirement, not a parameter",
                              ac.candidate.span);
                    else
                        error("cannot resolve '" + ac.candidate.path[0] + "'", ac.candidate.span);
                    ok = false;
                }
            }
            if (ok) kept.push_back(std::move(c));
        }
        checks = std::move(kept);
    }

    void finish_template(Template& t) {
        std::set<std::string> names;
        for (const auto& p : t.params)
            if (!names.insert(p).second)
                error("duplicate parameter name '" + p + "' in template '" + t.name + "'", t.span);
        std::set<std::string> reqs;
        for (const auto& r : t.requirements) {
            if (names.count(r.name))
                error("requirement name '" + r.name + "' collides with a parameter in template '" +
                          t.name + "'",
                      r.span);
            if (!reqs.insert(r.name).second)
                error("duplicate requirement name '" + r.name + "' in template '" + t.name + "'",
                      r.span);
            names.insert(r.name);
        }
        std::set<std::string> params(t.params.begin(), t.params.end());
        resolve_checks(t.checks, params, reqs);
    }

    void library(ComponentLibrary& lib) {
        std::set<std::string> seen;
        while (cur()) {
            if (accept(TokenKind::KwTemplate)) {
                Template t;
                if (template_decl(t)) {
                    finish_template(t);
                    if (!seen.insert(t.name).second)
                        error("duplicate template name '" + t.name + "'", t.span);
                    else
                        lib.templates.push_back(std::move(t));
                } else {
                    // Skip to the next plausible template start.
                    while (cur() && !at(TokenKind::KwTemplate)) ++pos;
                }
            } else {
                error("expected 'template'");
                while (cur() && !at(TokenKind::KwTemplate)) ++pos;
            }
        }
    }

    void problem(ProblemSpec& p) {
        if (!expect(TokenKind::KwProblem, "'problem'")) return;
        const Token* name = expect(TokenKind::Ident, "problem name");
        if (!name) return;
        p.name = name->text;
        p.span = name->span;
        if (!expect(TokenKind::LBrace, "'{'")) return;
        bool sawCheck = false;
        std::set<std::string> reqs;
        while (cur() && !at(TokenKind::RBrace)) {
            SourceSpan clauseSpan = here();
            if (accept(TokenKind::KwRequires)) {
                if (sawCheck)
                    error("'requires' clauses must precede 'check' clauses", clauseSpan);
                const Token* fac = expect(TokenKind::Ident, "facility name");
                const Token* rn = fac ? expect(TokenKind::Ident, "requirement name") : nullptr;
                if (fac && rn) {
                    if (!reqs.insert(rn->text).second)
                        error("duplicate requirement name '" + rn->text + "'", rn->span);
                    else
                        p.requirements.push_back({fac->text, rn->text, fac->span});
                }
                if (!expect(TokenKind::Semi, "';'")) sync();
            } else if (accept(TokenKind::KwCheck)) {
                sawCheck = true;
                Check c;
                if (check(c)) {
                    p.checks.push_back(std::move(c));
                    if (!expect(TokenKind::Semi, "';'")) sync();
                } else {
                    sync();
                }
            } else {
                error("expected 'requires' or 'check'");
                sync();
            }
        }
        expect(TokenKind::RBrace, "'}'");
        if (cur()) error("unexpected input after problem body");
        if (p.requirements.empty())
            warning("problem '" + p.name + "' declares no requirements", p.span);
        resolve_checks(p.checks, {}, reqs);
    }
};

} // namespace

ParseLibraryResult parse_library(std::string_view text, std::string_view file) {
    ParseLibraryResult res;
    res.library.file = std::string(file);
    LexResult lexed = tokenize(text, file);
    res.diagnostics = std::move(lexed.diagnostics);
    Parser p{lexed.tokens, std::string(file), res.diagnostics};
    p.library(res.library);
    return res;
}

ParseProblemResult parse_problem(std::string_view text, std::string_view file) {
    ParseProblemResult res;
    res.problem.file = std::string(file);
    LexResult lexed = tokenize(text, file);
    res.diagnostics = std::move(lexed.diagnostics);
    Parser p{lexed.tokens, std::string(file), res.diagnostics};
    p.problem(res.problem);
    return res;
}

} // namespace confweave
