#include "test_support.hpp"

#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "confweave/diagnostics.hpp"
#include "confweave/encoder.hpp"
#include "confweave/parser.hpp"
#include "confweave/validate.hpp"

namespace confweave::testsupport {

std::string fixture_path(const std::string& name) {
    return std::string(CONFWEAVE_FIXTURE_DIR) + "/" + name;
}

std::string read_file_or_throw(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

namespace {

[[noreturn]] void throw_diags(const std::string& what, const std::vector<Diagnostic>& diags) {
    std::ostringstream os;
    os << what << ":";
    for (const auto& d : diags) os << "\n  " << render(d);
    throw std::runtime_error(os.str());
}

} // namespace

ComponentLibrary parse_library_ok(const std::string& text, const std::string& file) {
    auto res = parse_library(text, file);
    if (has_errors(res.diagnostics)) throw_diags("library does not parse", res.diagnostics);
    return std::move(res.library);
}

ProblemSpec parse_problem_ok(const std::string& text, const std::string& file) {
    auto res = parse_problem(text, file);
    if (has_errors(res.diagnostics)) throw_diags("problem does not parse", res.diagnostics);
    return std::move(res.problem);
}

namespace {

// All randomness goes through these two helpers so the draw sequence is
// fixed by the seed alone, independent of standard library internals.
struct Rand {
    std::mt19937 rng;
    explicit Rand(uint32_t seed) : rng(seed) {}
    int pick(int lo, int hi) { return lo + static_cast<int>(rng() % (hi - lo + 1)); }
    bool chance(int percent) { return static_cast<int>(rng() % 100) < percent; }
};

const std::vector<std::string> kProps = {"p0", "p1", "p2", "p3", "p4"};

std::vector<std::string> sample_props(Rand& r, int lo, int hi) {
    std::vector<std::string> pool = kProps;
    for (size_t i = pool.size(); i > 1; --i)
        std::swap(pool[i - 1], pool[static_cast<size_t>(r.pick(0, static_cast<int>(i) - 1))]);
    int n = r.pick(lo, hi);
    pool.resize(static_cast<size_t>(std::min<int>(n, static_cast<int>(pool.size()))));
    return pool;
}

std::string join(const std::vector<std::string>& xs) {
    std::string out;
    for (size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ", ";
        out += xs[i];
    }
    return out;
}

struct TDef {
    std::string name;
    std::vector<std::string> provides;
    std::vector<std::string> params;
    std::vector<std::string> properties;
    std::vector<std::pair<std::string, std::string>> reqs; // (facility, local)
    std::vector<std::string> checks;                       // rendered source
};

} // namespace

std::optional<RandomInstance> make_random_instance(uint32_t seed) {
    Rand r(seed);

    // Layered facilities: problems require layer 0, layer-k providers may
    // require only layer k+1, layer 2 providers are leaves. This caps the
    // requirement depth at 3 (< default limit 4) with no cycles.
    std::vector<std::vector<std::string>> fac(3);
    int n0 = r.pick(1, 2), n1 = r.pick(1, 2);
    for (int i = 0; i < n0; ++i) fac[0].push_back("Fa" + std::to_string(i));
    for (int i = 0; i < n1; ++i) fac[1].push_back("Fb" + std::to_string(i));
    fac[2].push_back("Fc0");
    std::vector<std::string> allFacilities;
    for (const auto& level : fac)
        for (const auto& f : level) allFacilities.push_back(f);

    std::vector<TDef> tmpls;
    int counter = 0;
    // Generate leaves first so parameter obligations of shallower levels
    // can reference the parameter names candidates actually declare.
    for (int level = 2; level >= 0; --level) {
        for (const auto& f : fac[static_cast<size_t>(level)]) {
            int nCand = r.pick(1, 3);
            for (int c = 0; c < nCand; ++c) {
                TDef t;
                t.name = "Imp" + std::to_string(counter++);
                t.provides.push_back(f);
                if (fac[static_cast<size_t>(level)].size() > 1 && r.chance(15)) {
                    for (const auto& other : fac[static_cast<size_t>(level)])
                        if (other != f) {
                            t.provides.push_back(other);
                            break;
                        }
                }
                for (const auto& p : kProps)
                    if (r.chance(45)) t.properties.push_back(p);
                if (level < 2) {
                    const auto& below = fac[static_cast<size_t>(level) + 1];
                    int nReq = r.pick(0, 2);
                    for (int i = 0; i < nReq; ++i)
                        t.reqs.push_back({below[static_cast<size_t>(
                                              r.pick(0, static_cast<int>(below.size()) - 1))],
                                          "r" + std::to_string(i)});
                    int nPar = r.pick(0, 2);
                    for (int i = 0; i < nPar; ++i) {
                        std::string a = "a" + std::to_string(i);
                        t.params.push_back(a);
                        int nOb = r.pick(1, 2);
                        for (int o = 0; o < nOb; ++o) {
                            if (r.chance(20)) {
                                const std::string& pf = allFacilities[static_cast<size_t>(
                                    r.pick(0, static_cast<int>(allFacilities.size()) - 1))];
                                if (r.chance(30))
                                    t.checks.push_back(a + ".provides subsetof { " + pf + " }");
                                else
                                    t.checks.push_back("{ " + pf + " } subsetof " + a +
                                                       ".provides");
                            } else if (r.chance(50)) {
                                t.checks.push_back("{ " + join(sample_props(r, 1, 2)) +
                                                   " } subsetof " + a + ".properties");
                            } else {
                                t.checks.push_back(a + ".properties subsetof { " +
                                                   join(sample_props(r, 2, 4)) + " }");
                            }
                        }
                    }
                    if (!t.reqs.empty() && r.chance(25)) {
                        const auto& local = t.reqs[0].second;
                        if (r.chance(50))
                            t.checks.push_back("{ " + join(sample_props(r, 1, 2)) +
                                               " } subsetof " + local + ".properties");
                        else
                            t.checks.push_back(local + ".properties subsetof { " +
                                               join(sample_props(r, 2, 4)) + " }");
                    }
                }
                tmpls.push_back(std::move(t));
            }
        }
    }

    auto params_for_facility = [&](const std::string& f) {
        std::vector<std::string> out;
        std::set<std::string> seen;
        for (const auto& t : tmpls)
            if (std::count(t.provides.begin(), t.provides.end(), f))
                for (const auto& p : t.params)
                    if (seen.insert(p).second) out.push_back(p);
        return out;
    };

    // Template-scope accepts between two sub-requirements.
    for (auto& t : tmpls) {
        if (t.reqs.size() < 2 || !r.chance(20)) continue;
        auto params = params_for_facility(t.reqs[0].first);
        if (params.empty()) continue;
        const auto& param = params[static_cast<size_t>(
            r.pick(0, static_cast<int>(params.size()) - 1))];
        std::string check = t.reqs[0].second + "." + param + " accepts " + t.reqs[1].second;
        if (r.chance(30)) check += " with { " + join(sample_props(r, 1, 1)) + " }";
        t.checks.push_back(check);
    }

    // Problem over layer-0 facilities.
    struct QDef {
        std::string facility;
        std::string name;
    };
    std::vector<QDef> qs;
    int nq = r.pick(1, 3);
    for (int i = 0; i < nq; ++i)
        qs.push_back({fac[0][static_cast<size_t>(r.pick(0, static_cast<int>(fac[0].size()) - 1))],
                      "q" + std::to_string(i)});
    std::vector<std::string> probChecks;
    for (const auto& q : qs) {
        if (!r.chance(40)) continue;
        if (r.chance(20)) {
            const std::string& pf = allFacilities[static_cast<size_t>(
                r.pick(0, static_cast<int>(allFacilities.size()) - 1))];
            probChecks.push_back("{ " + pf + " } subsetof " + q.name + ".provides");
        } else if (r.chance(50)) {
            probChecks.push_back("{ " + join(sample_props(r, 1, 2)) + " } subsetof " + q.name +
                                 ".properties");
        } else {
            probChecks.push_back(q.name + ".properties subsetof { " +
                                 join(sample_props(r, 2, 4)) + " }");
        }
    }
    for (int attempt = 0; attempt < nq + 1; ++attempt) {
        if (!r.chance(60)) continue;
        const auto& owner = qs[static_cast<size_t>(r.pick(0, nq - 1))];
        auto params = params_for_facility(owner.facility);
        if (params.empty()) continue;
        const auto& param = params[static_cast<size_t>(
            r.pick(0, static_cast<int>(params.size()) - 1))];
        const auto& cand = qs[static_cast<size_t>(r.pick(0, nq - 1))];
        std::string check = owner.name + "." + param + " accepts " + cand.name;
        if (r.chance(30)) check += " with { " + join(sample_props(r, 1, 1)) + " }";
        probChecks.push_back(check);
    }

    // Render sources.
    std::ostringstream lib;
    for (const auto& t : tmpls) {
        lib << "template " << t.name << "(" << join(t.params) << ") {\n";
        lib << "  provides " << join(t.provides) << ";\n";
        if (!t.properties.empty()) lib << "  properties " << join(t.properties) << ";\n";
        for (const auto& [f, local] : t.reqs) lib << "  requires " << f << " " << local << ";\n";
        for (const auto& c : t.checks) lib << "  check " << c << ";\n";
        lib << "}\n\n";
    }
    std::ostringstream prob;
    prob << "problem Random" << seed << " {\n";
    for (const auto& q : qs) prob << "  requires " << q.facility << " " << q.name << ";\n";
    for (const auto& c : probChecks) prob << "  check " << c << ";\n";
    prob << "}\n";

    RandomInstance inst;
    inst.libraryText = lib.str();
    inst.problemText = prob.str();
    std::string tag = "<seed-" + std::to_string(seed) + ">";
    inst.library = parse_library_ok(inst.libraryText, tag + ".lib");
    inst.problem = parse_problem_ok(inst.problemText, tag + ".prob");
    auto diags = validate(inst.library, inst.problem);
    if (has_errors(diags)) throw_diags("generated instance does not validate", diags);

    // Size caps keep brute-force enumeration cheap.
    auto vars = expand(inst.library, inst.problem);
    if (vars.size() > 12) return std::nullopt;
    long product = 1;
    for (const auto& v : vars) {
        long options = static_cast<long>(
            candidate_implementations(inst.library, v.facility).size());
        if (v.conditional()) options += 1;
        product *= std::max<long>(1, options);
        if (product > 8000) return std::nullopt;
    }
    return inst;
}

} // namespace confweave::testsupport
