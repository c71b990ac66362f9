#include "confweave/cli.hpp"

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "confweave/diagnostics.hpp"
#include "confweave/encoder.hpp"
#include "confweave/errors.hpp"
#include "confweave/minion.hpp"
#include "confweave/oracle.hpp"
#include "confweave/parser.hpp"
#include "confweave/report.hpp"
#include "confweave/solver.hpp"
#include "confweave/validate.hpp"

namespace confweave {
namespace {

constexpr int kExitSat = 0;
constexpr int kExitUnsat = 1;
constexpr int kExitDiagnostics = 2;
constexpr int kExitUsage = 3;

std::optional<std::string> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct Options {
    std::string mode;
    std::vector<std::string> libraryPaths;
    std::string problemPath;
    int depth = kDefaultDepthLimit;
    std::optional<long> limit;
    std::string orderPath;
    std::string outPath;
    bool dynamicOrder = false;
};

struct Loaded {
    ComponentLibrary library;
    ProblemSpec problem;
    std::vector<Diagnostic> diagnostics;
};

// Several --library files form one library; templates keep file order and
// cross-file name clashes are diagnosed like in-file ones.
std::optional<Loaded> load_inputs(const Options& opt, std::ostream& err) {
    Loaded loaded;
    std::set<std::string> names;
    for (const auto& path : opt.libraryPaths) {
        auto text = read_file(path);
        if (!text) {
            err << "error: cannot read library file '" << path << "'\n";
            return std::nullopt;
        }
        ParseLibraryResult res = parse_library(*text, path);
        for (auto& d : res.diagnostics) loaded.diagnostics.push_back(std::move(d));
        for (auto& t : res.library.templates) {
            if (!names.insert(t.name).second) {
                loaded.diagnostics.push_back({Severity::Error,
                                              "duplicate template name '" + t.name + "'", path,
                                              t.span});
                continue;
            }
            loaded.library.templates.push_back(std::move(t));
        }
    }
    loaded.library.file = opt.libraryPaths.size() == 1 ? opt.libraryPaths[0] : "<library>";
    auto text = read_file(opt.problemPath);
    if (!text) {
        err << "error: cannot read problem file '" << opt.problemPath << "'\n";
        return std::nullopt;
    }
    ParseProblemResult res = parse_problem(*text, opt.problemPath);
    for (auto& d : res.diagnostics) loaded.diagnostics.push_back(std::move(d));
    loaded.problem = std::move(res.problem);
    return loaded;
}

// Order file: {"vars": [path, ...], "values": {path: [implementation, ...]}}
struct OrderSpec {
    std::vector<std::string> vars;
    std::map<std::string, std::vector<std::string>> values;
};

std::optional<OrderSpec> load_order(const std::string& path, std::ostream& err) {
    auto text = read_file(path);
    if (!text) {
        err << "error: cannot read order file '" << path << "'\n";
        return std::nullopt;
    }
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(*text);
    } catch (const nlohmann::json::exception& e) {
        err << "error: malformed order file: " << e.what() << "\n";
        return std::nullopt;
    }
    OrderSpec spec;
    if (!j.is_object()) {
        err << "error: order file must be a JSON object\n";
        return std::nullopt;
    }
    try {
        if (j.contains("vars")) spec.vars = j["vars"].get<std::vector<std::string>>();
        if (j.contains("values"))
            spec.values = j["values"].get<std::map<std::string, std::vector<std::string>>>();
    } catch (const nlohmann::json::exception&) {
        err << "error: order file: \"vars\" must be a string array and \"values\" a map of "
               "string arrays\n";
        return std::nullopt;
    }
    return spec;
}

bool apply_order(ConfigCsp& csp, const OrderSpec& spec, std::ostream& err) {
    std::map<std::string, std::vector<int>> codePrefs;
    for (const auto& [path, names] : spec.values) {
        std::vector<int> codes;
        for (const auto& name : names) {
            int code = csp.symbols.code_of(name);
            if (code < 0) {
                err << "error: unknown implementation '" << name << "' in order file\n";
                return false;
            }
            codes.push_back(code);
        }
        codePrefs[path] = std::move(codes);
    }
    try {
        csp = set_search_order(std::move(csp), spec.vars, codePrefs);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return false;
    }
    return true;
}

bool write_output(const std::string& payload, const std::string& outPath, std::ostream& out,
                  std::ostream& err) {
    if (outPath.empty()) {
        out << payload;
        return true;
    }
    std::ofstream f(outPath, std::ios::binary);
    if (!f) {
        err << "error: cannot write output file '" << outPath << "'\n";
        return false;
    }
    f << payload;
    return true;
}

int run_impl(const Options& opt, std::ostream& out, std::ostream& err) {
    auto loaded = load_inputs(opt, err);
    if (!loaded) return kExitUsage;

    auto validation = validate(loaded->library, loaded->problem);
    auto& diags = loaded->diagnostics;
    diags.insert(diags.end(), validation.begin(), validation.end());
    for (const auto& d : diags) err << render(d) << "\n";
    if (has_errors(diags)) return kExitDiagnostics;

    ConfigCsp csp;
    try {
        csp = encode(loaded->library, loaded->problem, opt.depth);
    } catch (const DepthExceededError& e) {
        err << "error: " << e.what() << "\n";
        return kExitDiagnostics;
    }

    if (!opt.orderPath.empty()) {
        auto spec = load_order(opt.orderPath, err);
        if (!spec || !apply_order(csp, *spec, err)) return kExitUsage;
    }

    if (opt.mode == "check") {
        int conditional = 0;
        for (const auto& v : csp.vars) conditional += v.conditional() ? 1 : 0;
        std::ostringstream os;
        os << "library: " << loaded->library.templates.size() << " templates\n"
           << "problem: " << loaded->problem.name << " (" << loaded->problem.requirements.size()
           << " requirements)\n"
           << "variables: " << csp.vars.size() << " ("
           << csp.vars.size() - static_cast<size_t>(conditional) << " top-level, " << conditional
           << " conditional)\n"
           << "constraints: " << csp.constraints.size() << "\n"
           << "channels: " << csp.channelCount << "\n"
           << "ok\n";
        if (!write_output(os.str(), opt.outPath, out, err)) return kExitUsage;
        return kExitSat;
    }

    if (opt.mode == "emit-minion") {
        std::string text;
        try {
            text = emit_minion(csp);
        } catch (const EmptyModelError& e) {
            err << "error: " << e.what() << "\n";
            return kExitDiagnostics;
        }
        auto issues = check_minion_syntax(text);
        if (!issues.empty()) {
            for (const auto& d : issues) err << render(d) << "\n";
            return kExitDiagnostics;
        }
        if (!write_output(text, opt.outPath, out, err)) return kExitUsage;
        return kExitSat;
    }

    if (opt.mode == "solve") {
        Solver solver(csp, opt.dynamicOrder);
        auto a = solver.next();
        if (!a) {
            err << "unsat";
            if (const auto& c = solver.last_conflict()) {
                err << ": " << c->origin;
                if (!c->guardChain.empty()) err << " [under " << c->guardChain << "]";
            }
            err << "\n";
            return kExitUnsat;
        }
        std::string payload = emit_report({project(csp, *a)});
        if (!write_output(payload, opt.outPath, out, err)) return kExitUsage;
        return kExitSat;
    }

    // all
    auto configs = solve_all(csp, opt.limit, opt.dynamicOrder);
    std::string payload = emit_report(configs);
    if (!write_output(payload, opt.outPath, out, err)) return kExitUsage;
    if (configs.empty()) {
        err << "unsat\n";
        return kExitUnsat;
    }
    return kExitSat;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"confweave: component configuration engine"};
    app.require_subcommand(1);

    Options opt;
    auto add_common = [&](CLI::App* sub, bool withOrder) {
        sub->add_option("--library", opt.libraryPaths, "component library file (repeatable)")
            ->required()
            ->type_name("PATH");
        sub->add_option("--problem", opt.problemPath, "problem file")
            ->required()
            ->type_name("PATH");
        sub->add_option("--depth", opt.depth, "requirement expansion depth limit")
            ->check(CLI::PositiveNumber);
        sub->add_option("--out", opt.outPath, "write the result to a file instead of stdout")
            ->type_name("PATH");
        if (withOrder)
            sub->add_option("--order", opt.orderPath,
                            "JSON search order file: {\"vars\": [...], \"values\": {...}}")
                ->type_name("PATH");
    };

    CLI::App* check = app.add_subcommand("check", "parse, validate and summarize the model");
    add_common(check, false);
    CLI::App* solve = app.add_subcommand("solve", "report the first configuration");
    add_common(solve, true);
    solve->add_flag("--dynamic-order", opt.dynamicOrder,
                    "branch on the smallest remaining domain");
    CLI::App* all = app.add_subcommand("all", "report every configuration");
    add_common(all, true);
    long limitValue = 0;
    CLI::Option* limitOpt = all->add_option("--limit", limitValue,
                                            "stop after this many configurations")
                                ->check(CLI::PositiveNumber)
                                ->type_name("N");
    all->add_flag("--dynamic-order", opt.dynamicOrder,
                  "branch on the smallest remaining domain");
    CLI::App* emitMinion = app.add_subcommand("emit-minion", "serialize the constraint model");
    add_common(emitMinion, true);

    std::vector<const char*> argv;
    argv.push_back("confweave");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kExitSat : kExitUsage;
    }

    if (limitOpt->count() > 0) opt.limit = limitValue;
    for (CLI::App* sub : {check, solve, all, emitMinion})
        if (sub->parsed()) opt.mode = sub->get_name();
    return run_impl(opt, out, err);
}

} // namespace confweave
