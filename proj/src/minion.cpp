#include "confweave/minion.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "confweave/errors.hpp"

namespace confweave {
namespace {

// Minion identifiers are [A-Za-z_][A-Za-z0-9_]*; requirement paths carry
// '=' and '/'. The rewrite is fixed and collisions are resolved by a
// numeric suffix, so emission is deterministic.
std::string mangle(const std::string& path) {
    std::string out;
    for (char c : path) {
        if (c == '=')
            out += "_is_";
        else if (std::isalnum(static_cast<unsigned char>(c)) || c == '_')
            out += c;
        else
            out += '_';
    }
    if (out.empty() || std::isdigit(static_cast<unsigned char>(out[0]))) out = "v_" + out;
    return out;
}

struct Namer {
    std::set<std::string> used;
    std::string claim(std::string base) {
        if (used.insert(base).second) return base;
        for (int n = 2;; ++n) {
            std::string cand = base + "_" + std::to_string(n);
            if (used.insert(cand).second) return cand;
        }
    }
};

struct NameTable {
    std::vector<std::string> comp;                 // by var index
    std::vector<std::vector<std::string>> prop;    // [var][property]
    std::vector<std::vector<std::string>> prov;    // [var][facility]
    std::vector<std::string> chan;                 // by channel index
};

NameTable build_names(const ConfigCsp& csp) {
    NameTable t;
    Namer namer;
    for (const auto& v : csp.vars) t.comp.push_back(namer.claim(mangle(v.path)));
    size_t P = csp.symbols.properties.size();
    size_t F = csp.symbols.facilities.size();
    for (size_t v = 0; v < csp.vars.size(); ++v) {
        t.prop.emplace_back();
        for (size_t p = 0; p < P; ++p)
            t.prop.back().push_back(
                namer.claim(t.comp[v] + "_prop_" + mangle(csp.symbols.properties[p])));
        t.prov.emplace_back();
        for (size_t f = 0; f < F; ++f)
            t.prov.back().push_back(
                namer.claim(t.comp[v] + "_prov_" + mangle(csp.symbols.facilities[f])));
    }
    for (int k = 0; k < csp.channelCount; ++k)
        t.chan.push_back(namer.claim("chan_" + std::to_string(k)));
    return t;
}

std::string bit_name(const NameTable& t, const BitRef& b) {
    return b.array == SetKind::Properties ? t.prop[b.var][b.index] : t.prov[b.var][b.index];
}

std::string eq_codes_or(const NameTable& t, int var, const std::vector<int>& codes) {
    if (codes.size() == 1)
        return "eq(" + t.comp[var] + "," + std::to_string(codes[0]) + ")";
    std::string out = "watched-or({";
    for (size_t i = 0; i < codes.size(); ++i) {
        if (i) out += ", ";
        out += "eq(" + t.comp[var] + "," + std::to_string(codes[i]) + ")";
    }
    return out + "})";
}

std::string guard_expr(const NameTable& t, const Guard& g) {
    if (g.size() == 1)
        return "eq(" + t.comp[g[0].var] + "," + std::to_string(g[0].code) + ")";
    std::string out = "watched-and({";
    for (size_t i = 0; i < g.size(); ++i) {
        if (i) out += ", ";
        out += "eq(" + t.comp[g[i].var] + "," + std::to_string(g[i].code) + ")";
    }
    return out + "})";
}

} // namespace

std::string minion_var_name(const ConfigCsp& csp, int var) {
    return build_names(csp).comp.at(static_cast<size_t>(var));
}

std::string emit_minion(const ConfigCsp& csp) {
    if (csp.vars.empty()) throw EmptyModelError("model has no component variables");
    NameTable names = build_names(csp);
    std::ostringstream os;
    os << "MINION 3\n";

    os << "**VARIABLES**\n";
    for (size_t v = 0; v < csp.vars.size(); ++v) {
        const auto& dom = csp.vars[v].domain;
        int lo = dom.empty() ? 0 : dom.front();
        int hi = dom.empty() ? 0 : dom.back();
        os << "DISCRETE " << names.comp[v] << " {" << lo << ".." << hi << "}\n";
    }
    for (size_t v = 0; v < csp.vars.size(); ++v) {
        for (const auto& n : names.prop[v]) os << "DISCRETE " << n << " {0..1}\n";
        for (const auto& n : names.prov[v]) os << "DISCRETE " << n << " {0..1}\n";
    }
    for (const auto& n : names.chan) os << "DISCRETE " << n << " {0..1}\n";

    os << "**SEARCH**\n";
    os << "VARORDER [";
    bool first = true;
    auto emit_var = [&](const std::string& n) {
        if (!first) os << ", ";
        first = false;
        os << n;
    };
    size_t total = 0;
    for (int v : csp.search.varOrder) emit_var(names.comp[v]), ++total;
    for (size_t v = 0; v < csp.vars.size(); ++v) {
        for (const auto& n : names.prop[v]) emit_var(n), ++total;
        for (const auto& n : names.prov[v]) emit_var(n), ++total;
    }
    for (const auto& n : names.chan) emit_var(n), ++total;
    os << "]\n";
    os << "VALORDER [";
    for (size_t i = 0; i < total; ++i) os << (i ? ", a" : "a");
    os << "]\n";
    // Value orders beyond plain ascending cannot be stated in VALORDER;
    // they ride along as structured comments.
    for (size_t v = 0; v < csp.vars.size(); ++v) {
        if (csp.search.valueOrder[v] == csp.vars[v].domain) continue;
        os << "# VALPREF " << names.comp[v] << " [";
        const auto& ord = csp.search.valueOrder[v];
        for (size_t i = 0; i < ord.size(); ++i) os << (i ? "," : "") << ord[i];
        os << "]\n";
    }
    os << "PRINT [[";
    for (size_t v = 0; v < csp.vars.size(); ++v) os << (v ? ", " : "") << names.comp[v];
    os << "]]\n";

    os << "**CONSTRAINTS**\n";
    os << "# domain restrictions\n";
    for (size_t v = 0; v < csp.vars.size(); ++v) {
        const auto& dom = csp.vars[v].domain;
        bool contiguous = !dom.empty() &&
                          dom.back() - dom.front() + 1 == static_cast<int>(dom.size());
        if (contiguous) continue;
        os << "w-inset(" << names.comp[v] << ", [";
        for (size_t i = 0; i < dom.size(); ++i) os << (i ? "," : "") << dom[i];
        os << "])\n";
    }
    os << "# membership definitions\n";
    for (const auto& c : csp.constraints) {
        const auto* m = std::get_if<IffMembership>(&c.node);
        if (!m) continue;
        const std::string bn = bit_name(names, m->bit);
        if (m->codes.empty())
            os << "eq(" << bn << ", 0)\n";
        else
            os << "reify(" << eq_codes_or(names, m->var, m->codes) << ", " << bn << ")\n";
    }
    os << "# unconditional obligations\n";
    for (const auto& c : csp.constraints) {
        const auto* fb = std::get_if<ForceBit>(&c.node);
        if (!fb || !fb->guard.empty()) continue;
        os << "eq(" << bit_name(names, fb->bit) << ", " << (fb->value ? 1 : 0) << ")\n";
    }
    os << "# channelling\n";
    for (const auto& c : csp.constraints) {
        const auto* cr = std::get_if<ChannelReify>(&c.node);
        if (!cr) continue;
        os << "reify(" << guard_expr(names, cr->guard) << ", " << names.chan[cr->channel]
           << ")\n";
    }
    for (const auto& c : csp.constraints) {
        const auto* im = std::get_if<ChannelImply>(&c.node);
        if (!im) continue;
        os << "reifyimply(eq(" << bit_name(names, im->bit) << ", " << (im->value ? 1 : 0)
           << "), " << names.chan[im->channel] << ")\n";
    }
    os << "# activation\n";
    for (const auto& c : csp.constraints) {
        const auto* sl = std::get_if<SentinelLink>(&c.node);
        if (!sl) continue;
        std::vector<int> active;
        for (int code : csp.vars[sl->var].domain)
            if (code != SymbolTable::kInactive) active.push_back(code);
        if (active.empty())
            os << "eq(" << names.chan[sl->channel] << ", 0)\n";
        else
            os << "reify(" << eq_codes_or(names, sl->var, active) << ", "
               << names.chan[sl->channel] << ")\n";
    }
    os << "**EOF**\n";
    return os.str();
}

namespace {

// Line-oriented checker for the emitted subset of Minion 3.
struct MinionChecker {
    std::vector<Diagnostic> diags;
    std::set<std::string> declared;
    int line = 0;

    void error(const std::string& msg, size_t len = 1) {
        diags.push_back({Severity::Error, msg, "<minion>", {line, 1, static_cast<int>(len)}});
    }

    static std::string trim(std::string s) {
        size_t b = s.find_first_not_of(" \t\r");
        size_t e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? "" : s.substr(b, e - b + 1);
    }

    // --- tiny expression scanner over one constraint line ---
    struct Cursor {
        const std::string& s;
        size_t i = 0;
        void ws() {
            while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
        }
        bool eat(char c) {
            ws();
            if (i < s.size() && s[i] == c) {
                ++i;
                return true;
            }
            return false;
        }
        std::string ident() { // letters, digits, '_' and '-' (w-inset, watched-or)
            ws();
            size_t b = i;
            while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) ||
                                    s[i] == '_' || s[i] == '-'))
                ++i;
            return s.substr(b, i - b);
        }
        bool integer() {
            ws();
            size_t b = i;
            if (i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
            size_t d = i;
            while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
            if (i == d) {
                i = b;
                return false;
            }
            return true;
        }
        bool done() {
            ws();
            return i >= s.size();
        }
    };

    bool term(Cursor& c) { // integer or declared variable
        c.ws();
        if (c.i < c.s.size() && (std::isdigit(static_cast<unsigned char>(c.s[c.i])) ||
                                 c.s[c.i] == '-' || c.s[c.i] == '+'))
            return c.integer();
        std::string name = c.ident();
        if (name.empty()) {
            error("expected a variable or integer");
            return false;
        }
        if (!declared.count(name)) {
            error("use of undeclared variable '" + name + "'");
            return false;
        }
        return true;
    }

    bool variable(Cursor& c) {
        std::string name = c.ident();
        if (name.empty()) {
            error("expected a variable name");
            return false;
        }
        if (!declared.count(name)) {
            error("use of undeclared variable '" + name + "'");
            return false;
        }
        return true;
    }

    bool constraint(Cursor& c) {
        std::string name = c.ident();
        if (name.empty()) {
            error("expected a constraint name");
            return false;
        }
        if (!c.eat('(')) {
            error("expected '(' after '" + name + "'");
            return false;
        }
        bool ok;
        if (name == "eq") {
            ok = term(c) && c.eat(',') && term(c);
        } else if (name == "w-inset") {
            ok = variable(c) && c.eat(',') && c.eat('[');
            if (ok) {
                if (!c.integer()) {
                    error("expected an integer in w-inset list");
                    ok = false;
                }
                while (ok && c.eat(','))
                    if (!c.integer()) {
                        error("expected an integer in w-inset list");
                        ok = false;
                    }
                ok = ok && c.eat(']');
            }
        } else if (name == "reify" || name == "reifyimply") {
            ok = constraint(c) && c.eat(',') && variable(c);
        } else if (name == "watched-or" || name == "watched-and") {
            ok = c.eat('{') && constraint(c);
            while (ok && c.eat(',')) ok = constraint(c);
            ok = ok && c.eat('}');
        } else {
            error("unknown constraint '" + name + "'");
            return false;
        }
        if (!ok) return false;
        if (!c.eat(')')) {
            error("expected ')' to close '" + name + "'");
            return false;
        }
        return true;
    }

    static std::vector<std::string> split_list(const std::string& inner) {
        std::vector<std::string> out;
        std::string cur;
        for (char ch : inner) {
            if (ch == ',') {
                out.push_back(trim(cur));
                cur.clear();
            } else {
                cur += ch;
            }
        }
        if (!trim(cur).empty() || !out.empty()) out.push_back(trim(cur));
        return out;
    }

    void check_variables_line(const std::string& s) {
        Cursor c{s};
        std::string kw = c.ident();
        if (kw != "DISCRETE") {
            error("expected a DISCRETE declaration");
            return;
        }
        std::string name = c.ident();
        if (name.empty() || std::isdigit(static_cast<unsigned char>(name[0])) ||
            name.find('-') != std::string::npos) {
            error("invalid variable name");
            return;
        }
        if (!declared.insert(name).second) {
            error("duplicate variable '" + name + "'");
            return;
        }
        if (!c.eat('{') || !c.integer() || !(c.eat('.') && c.eat('.')) || !c.integer() ||
            !c.eat('}') || !c.done())
            error("malformed DISCRETE bounds, expected {lo..hi}");
    }

    size_t varorderCount = 0, valorderCount = 0;
    bool sawVarorder = false, sawValorder = false, sawPrint = false;

    void check_search_line(const std::string& s) {
        Cursor c{s};
        std::string kw = c.ident();
        if (kw == "VARORDER") {
            if (sawVarorder) error("duplicate VARORDER");
            sawVarorder = true;
            size_t b = s.find('[');
            size_t e = s.rfind(']');
            if (b == std::string::npos || e == std::string::npos || e < b) {
                error("malformed VARORDER");
                return;
            }
            for (const auto& n : split_list(s.substr(b + 1, e - b - 1))) {
                ++varorderCount;
                if (!declared.count(n)) error("use of undeclared variable '" + n + "'");
            }
        } else if (kw == "VALORDER") {
            if (sawValorder) error("duplicate VALORDER");
            sawValorder = true;
            size_t b = s.find('[');
            size_t e = s.rfind(']');
            if (b == std::string::npos || e == std::string::npos || e < b) {
                error("malformed VALORDER");
                return;
            }
            for (const auto& n : split_list(s.substr(b + 1, e - b - 1))) {
                ++valorderCount;
                if (n != "a" && n != "d") error("VALORDER entries must be 'a' or 'd'");
            }
        } else if (kw == "PRINT") {
            if (sawPrint) error("duplicate PRINT");
            sawPrint = true;
            size_t b = s.find("[[");
            size_t e = s.rfind("]]");
            if (b == std::string::npos || e == std::string::npos || e < b) {
                error("malformed PRINT");
                return;
            }
            std::string inner = s.substr(b + 2, e - b - 2);
            // rows separated by "],["
            size_t pos = 0;
            while (true) {
                size_t sep = inner.find("],[", pos);
                std::string row = inner.substr(pos, sep == std::string::npos ? std::string::npos
                                                                             : sep - pos);
                for (const auto& n : split_list(row))
                    if (!declared.count(n)) error("use of undeclared variable '" + n + "'");
                if (sep == std::string::npos) break;
                pos = sep + 3;
            }
        } else {
            error("expected VARORDER, VALORDER or PRINT");
        }
    }

    void check_constraints_line(const std::string& s) {
        Cursor c{s};
        if (!constraint(c)) return;
        if (!c.done()) error("trailing input after constraint");
    }

    std::vector<Diagnostic> run(std::string_view text) {
        // `section` is the region whose content we are currently reading;
        // each marker closes it and opens the next.
        enum Section { Header, Variables, Search, Constraints, End };
        Section section = Header;
        bool sawFirstLine = false;
        std::istringstream is{std::string(text)};
        std::string raw;
        while (std::getline(is, raw)) {
            ++line;
            std::string s = trim(raw);
            if (s.empty() || s[0] == '#') continue;
            if (!sawFirstLine) {
                sawFirstLine = true;
                if (s == "MINION 3") continue;
                error("first line must be 'MINION 3'", s.size());
            }
            if (s == "**VARIABLES**" || s == "**SEARCH**" || s == "**CONSTRAINTS**" ||
                s == "**EOF**") {
                const char* expected = section == Header        ? "**VARIABLES**"
                                       : section == Variables   ? "**SEARCH**"
                                       : section == Search      ? "**CONSTRAINTS**"
                                       : section == Constraints ? "**EOF**"
                                                                : nullptr;
                if (!expected || s != expected)
                    error("section marker '" + s + "' out of order");
                else
                    section = static_cast<Section>(static_cast<int>(section) + 1);
                continue;
            }
            switch (section) {
                case Header:
                    error("expected '**VARIABLES**'");
                    break;
                case Variables:
                    check_variables_line(s);
                    break;
                case Search:
                    check_search_line(s);
                    break;
                case Constraints:
                    check_constraints_line(s);
                    break;
                case End:
                    error("content after '**EOF**'", s.size());
                    break;
            }
        }
        if (section != End) error("missing section markers before end of input");
        if (sawVarorder && sawValorder && varorderCount != valorderCount)
            error("VALORDER length does not match VARORDER");
        return std::move(diags);
    }
};

} // namespace

std::vector<Diagnostic> check_minion_syntax(std::string_view text) {
    MinionChecker checker;
    return checker.run(text);
}

std::optional<Assignment> parse_minion_solution(const ConfigCsp& csp, std::string_view output) {
    std::istringstream is{std::string(output)};
    std::string lineText;
    std::optional<std::vector<int>> values;
    while (std::getline(is, lineText)) {
        auto pos = lineText.find("Sol:");
        if (pos == std::string::npos) continue;
        std::istringstream ls(lineText.substr(pos + 4));
        std::vector<int> vs;
        int v;
        while (ls >> v) vs.push_back(v);
        values = std::move(vs);
        break;
    }
    if (!values) return std::nullopt;
    if (values->size() != csp.vars.size())
        throw MalformedAssignmentError("solution line has " + std::to_string(values->size()) +
                                       " values, expected " + std::to_string(csp.vars.size()));

    Assignment a;
    a.componentValues = *values;
    a.propBits.assign(csp.vars.size(),
                      std::vector<uint8_t>(csp.symbols.properties.size(), 0));
    a.provBits.assign(csp.vars.size(),
                      std::vector<uint8_t>(csp.symbols.facilities.size(), 0));
    a.channels.assign(static_cast<size_t>(csp.channelCount), 0);
    auto holds = [&](const Guard& g) {
        return std::all_of(g.begin(), g.end(), [&](const GuardLiteral& l) {
            return a.componentValues[static_cast<size_t>(l.var)] == l.code;
        });
    };
    for (const auto& c : csp.constraints) {
        if (const auto* m = std::get_if<IffMembership>(&c.node)) {
            bool member = std::binary_search(m->codes.begin(), m->codes.end(),
                                             a.componentValues[static_cast<size_t>(m->var)]);
            uint8_t& bit = m->bit.array == SetKind::Properties
                               ? a.propBits[m->bit.var][m->bit.index]
                               : a.provBits[m->bit.var][m->bit.index];
            bit = member ? 1 : 0;
        } else if (const auto* cr = std::get_if<ChannelReify>(&c.node)) {
            a.channels[static_cast<size_t>(cr->channel)] = holds(cr->guard) ? 1 : 0;
        }
    }
    return a;
}

} // namespace confweave
