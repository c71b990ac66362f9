#include <doctest.h>

#include <algorithm>
#include <set>

#include "confweave/encoder.hpp"
#include "confweave/errors.hpp"
#include "confweave/oracle.hpp"
#include "confweave/solver.hpp"
#include "test_support.hpp"

using namespace confweave;
namespace ts = confweave::testsupport;

namespace {

struct Pair {
    ComponentLibrary lib;
    ProblemSpec prob;
    ConfigCsp csp;
};

Pair load_pair(const char* libFile, const char* probFile) {
    Pair p;
    p.lib = ts::parse_library_ok(ts::read_file_or_throw(ts::fixture_path(libFile)));
    p.prob = ts::parse_problem_ok(ts::read_file_or_throw(ts::fixture_path(probFile)));
    p.csp = encode(p.lib, p.prob);
    return p;
}

Pair bundled() { return load_pair("solver_components.adl", "simple_sum.adl"); }
Pair unsat_pair() { return load_pair("no_constant_components.adl", "unsat_equation.adl"); }

const char* kPickLib = R"(
template ConstantVariable() {
  provides IPropVariable;
  properties domain_eq_1, domain_le_2;
}
template BooleanVariable() {
  provides IPropVariable;
  properties domain_le_2, removable_values;
  requires IMemory mem;
}
template MemoryManager() {
  provides IMemory;
}
)";

Pair pick_pair(bool withUpperBound) {
    Pair p;
    p.lib = ts::parse_library_ok(kPickLib);
    std::string prob = "problem Pick {\n  requires IPropVariable a;\n"
                       "  check { domain_le_2 } subsetof a.properties;\n";
    if (withUpperBound) prob += "  check a.properties subsetof { domain_le_2, removable_values };\n";
    prob += "}\n";
    p.prob = ts::parse_problem_ok(prob);
    p.csp = encode(p.lib, p.prob);
    return p;
}

// The solution a static-order search over the bundled fixture finds first.
const Configuration kBundledFirst = {
    {"pvx", "ConstantVariable"},   {"pvy", "ConstantVariable"}, {"pvz", "ConstantVariable"},
    {"pvw", "ConstantVariable"},   {"pvc6", "ConstantVariable"},
    {"sumxyw6", "BooleanSum"},     {"sumxz", "BooleanSum"}};

std::set<Configuration> as_set(const std::vector<Configuration>& v) {
    return {v.begin(), v.end()};
}

} // namespace

TEST_CASE("a forced single-candidate problem has exactly one solution") {
    auto p = pick_pair(true);
    auto res = solve_first(p.csp);
    REQUIRE(res.sat);
    CHECK(res.configuration ==
          Configuration{{"a", "BooleanVariable"}, {"a=BooleanVariable/mem", "MemoryManager"}});
    CHECK(project(p.csp, res.assignment) == res.configuration);
    CHECK(check_assignment(p.csp, res.assignment));
    CHECK(solve_all(p.csp).size() == 1);
}

TEST_CASE("value order decides which solution comes first") {
    auto p = pick_pair(false);
    auto all = solve_all(p.csp);
    REQUIRE(all.size() == 2);
    CHECK(all[0] == Configuration{{"a", "ConstantVariable"}});
    CHECK(all[1] ==
          Configuration{{"a", "BooleanVariable"}, {"a=BooleanVariable/mem", "MemoryManager"}});

    auto flipped = set_search_order(p.csp, {}, {{"a", {2}}});
    auto res = solve_first(flipped);
    REQUIRE(res.sat);
    CHECK(res.configuration.at("a") == "BooleanVariable");
}

TEST_CASE("check_assignment rejects tampered and malformed assignments") {
    auto p = pick_pair(true);
    auto res = solve_first(p.csp);
    REQUIRE(res.sat);

    auto flippedBit = res.assignment;
    flippedBit.propBits[0][0] ^= 1;
    CHECK(!check_assignment(p.csp, flippedBit));

    auto flippedChannel = res.assignment;
    flippedChannel.channels[0] ^= 1;
    CHECK(!check_assignment(p.csp, flippedChannel));

    auto truncated = res.assignment;
    truncated.componentValues.pop_back();
    CHECK_THROWS_AS(check_assignment(p.csp, truncated), MalformedAssignmentError);

    auto outOfDomain = res.assignment;
    outOfDomain.componentValues[0] = 9;
    CHECK_THROWS_AS(check_assignment(p.csp, outOfDomain), MalformedAssignmentError);

    auto nonBoolean = res.assignment;
    nonBoolean.propBits[0][1] = 2;
    CHECK_THROWS_AS(check_assignment(p.csp, nonBoolean), MalformedAssignmentError);
}

TEST_CASE("the bundled problem has 96 solutions matching the oracle") {
    auto p = bundled();
    Solver solver(p.csp);
    REQUIRE(solver.root_consistent());

    std::vector<Configuration> found;
    while (auto a = solver.next()) {
        CHECK(check_assignment(p.csp, *a));
        found.push_back(project(p.csp, *a));
    }
    CHECK(found.size() == 96);
    CHECK(as_set(found).size() == 96);
    CHECK(found.front() == kBundledFirst);
    CHECK(solver.stats().solutions == 96);

    auto oracle = enumerate_configurations(p.lib, p.prob);
    CHECK(as_set(found) == as_set(oracle));

    // Exhausted searches stay exhausted.
    CHECK(!solver.next().has_value());
    CHECK(!solver.next().has_value());
}

TEST_CASE("solve_all respects the limit and follows search order") {
    auto p = bundled();
    auto limited = solve_all(p.csp, 10);
    REQUIRE(limited.size() == 10);
    auto full = solve_all(p.csp);
    REQUIRE(full.size() == 96);
    CHECK(std::equal(limited.begin(), limited.end(), full.begin()));

    auto oracle = enumerate_configurations(p.lib, p.prob);
    sort_configurations(p.lib, p.prob, oracle);
    CHECK(full == oracle);
}

TEST_CASE("dynamic variable order finds the same solution set") {
    auto p = bundled();
    auto dynamic = solve_all(p.csp, {}, true);
    CHECK(dynamic.size() == 96);
    CHECK(as_set(dynamic) == as_set(solve_all(p.csp)));
}

TEST_CASE("root assumptions restrict the search") {
    auto p = bundled();
    Solver solver(p.csp);
    REQUIRE(solver.assume(p.csp.var_of("pvx"), 3)); // DiscreteVariable
    REQUIRE(solver.root_consistent());

    const Configuration expectedFirst = {
        {"pvx", "DiscreteVariable"},
        {"pvy", "BooleanVariable"},
        {"pvz", "BooleanVariable"},
        {"pvw", "BooleanVariable"},
        {"pvc6", "ConstantVariable"},
        {"sumxyw6", "GACSum"},
        {"sumxz", "GACSum"},
        {"pvx=DiscreteVariable/mem", "MemoryManager"},
        {"pvy=BooleanVariable/mem", "MemoryManager"},
        {"pvz=BooleanVariable/mem", "MemoryManager"},
        {"pvw=BooleanVariable/mem", "MemoryManager"},
        {"sumxyw6=GACSum/mem", "MemoryManager"},
        {"sumxz=GACSum/mem", "MemoryManager"}};

    std::vector<Configuration> found;
    while (auto a = solver.next()) found.push_back(project(p.csp, *a));
    REQUIRE(!found.empty());
    CHECK(found.front() == expectedFirst);
    CHECK(found.size() == 24);
    for (const auto& c : found) CHECK(c.at("pvx") == "DiscreteVariable");

    auto oracle = enumerate_configurations(p.lib, p.prob);
    std::vector<Configuration> filtered;
    for (auto& c : oracle)
        if (c.at("pvx") == "DiscreteVariable") filtered.push_back(std::move(c));
    CHECK(as_set(found) == as_set(filtered));
}

TEST_CASE("an impossible assumption fails immediately") {
    auto p = bundled();
    Solver solver(p.csp);
    CHECK(!solver.assume(p.csp.var_of("pvx"), 6)); // MemoryManager: wrong facility
    CHECK(!solver.root_consistent());
}

TEST_CASE("value preferences steer the first solution") {
    auto p = bundled();
    auto steered = set_search_order(p.csp, {}, {{"pvx", {2}}});
    auto res = solve_first(steered);
    REQUIRE(res.sat);
    CHECK(res.configuration == Configuration{{"pvx", "BooleanVariable"},
                                             {"pvy", "ConstantVariable"},
                                             {"pvz", "ConstantVariable"},
                                             {"pvw", "ConstantVariable"},
                                             {"pvc6", "ConstantVariable"},
                                             {"sumxyw6", "BooleanSum"},
                                             {"sumxz", "BooleanSum"},
                                             {"pvx=BooleanVariable/mem", "MemoryManager"}});
}

TEST_CASE("variable order changes which branch is explored first") {
    auto p = bundled();
    auto reordered = set_search_order(p.csp, {"sumxyw6"}, {});
    auto res = solve_first(reordered);
    REQUIRE(res.sat);
    CHECK(res.configuration == Configuration{{"sumxyw6", "GACSum"},
                                             {"pvx", "BooleanVariable"},
                                             {"pvy", "BooleanVariable"},
                                             {"pvz", "ConstantVariable"},
                                             {"pvw", "BooleanVariable"},
                                             {"pvc6", "ConstantVariable"},
                                             {"sumxz", "BooleanSum"},
                                             {"pvx=BooleanVariable/mem", "MemoryManager"},
                                             {"pvy=BooleanVariable/mem", "MemoryManager"},
                                             {"pvw=BooleanVariable/mem", "MemoryManager"},
                                             {"sumxyw6=GACSum/mem", "MemoryManager"}});
}

TEST_CASE("an unsatisfiable problem is refuted at the root") {
    auto p = unsat_pair();
    Solver solver(p.csp);
    CHECK(!solver.root_consistent());
    REQUIRE(solver.last_conflict().has_value());
    CHECK(solver.last_conflict()->origin.find("accepts pvz") != std::string::npos);
    CHECK(solver.last_conflict()->guardChain == "sumxz=BooleanSum");

    CHECK(!solve_first(p.csp).sat);
    CHECK(solve_all(p.csp).empty());
    CHECK(!propagate_root(p.csp).has_value());
    CHECK(enumerate_configurations(p.lib, p.prob).empty());
}

TEST_CASE("root propagation on a satisfiable model keeps supported values") {
    auto p = bundled();
    auto domains = propagate_root(p.csp);
    REQUIRE(domains.has_value());
    REQUIRE(domains->size() == p.csp.vars.size());
    for (size_t v = 0; v < p.csp.vars.size(); ++v)
        CHECK((*domains)[v] == p.csp.vars[v].domain);
}
