#include <doctest.h>

#include <algorithm>

#include "confweave/parser.hpp"
#include "test_support.hpp"

using namespace confweave;
namespace ts = confweave::testsupport;

namespace {

bool any_message(const std::vector<Diagnostic>& diags, const std::string& needle,
                 Severity sev = Severity::Error) {
    return std::any_of(diags.begin(), diags.end(), [&](const Diagnostic& d) {
        return d.severity == sev && d.message.find(needle) != std::string::npos;
    });
}

} // namespace

TEST_CASE("parser builds a full template") {
    auto res = parse_library(R"(
template GACSum(args) {
  provides IConstraint, IReplaceable;
  properties heavy;
  requires IMemory mem;
  check { removable_values } subsetof args.properties;
  check mem.extra accepts mem with { p1, p2 };
}
)");
    REQUIRE(!has_errors(res.diagnostics));
    REQUIRE(res.library.templates.size() == 1);
    const Template& t = res.library.templates[0];
    CHECK(t.name == "GACSum");
    CHECK(t.params == std::vector<std::string>{"args"});
    CHECK(t.provides == std::vector<std::string>{"IConstraint", "IReplaceable"});
    CHECK(t.properties == std::vector<std::string>{"heavy"});
    REQUIRE(t.requirements.size() == 1);
    CHECK(t.requirements[0].facility == "IMemory");
    CHECK(t.requirements[0].name == "mem");
    REQUIRE(t.checks.size() == 2);
    const auto& sc = std::get<SubsetCheck>(t.checks[0].node);
    CHECK(sc.lhs.kind == SetExpr::Kind::Literal);
    CHECK(sc.lhs.items == std::vector<std::string>{"removable_values"});
    CHECK(sc.rhs.kind == SetExpr::Kind::EntitySet);
    CHECK(sc.rhs.entity.path == std::vector<std::string>{"args"});
    CHECK(sc.rhs.select == SetKind::Properties);
    const auto& ac = std::get<AcceptsCheck>(t.checks[1].node);
    CHECK(ac.slot.path == std::vector<std::string>{"mem", "extra"});
    CHECK(ac.candidate.path == std::vector<std::string>{"mem"});
    CHECK(ac.withProperties == std::vector<std::string>{"p1", "p2"});
    CHECK(t.span.line == 2);
}

TEST_CASE("parser builds a problem") {
    auto res = parse_problem(R"(problem Tiny {
  requires IPropVariable x;
  requires IConstraint c;
  check { fast } subsetof x.properties;
  check c.first accepts x;
})");
    REQUIRE(!has_errors(res.diagnostics));
    CHECK(res.problem.name == "Tiny");
    REQUIRE(res.problem.requirements.size() == 2);
    CHECK(res.problem.requirements[1].facility == "IConstraint");
    REQUIRE(res.problem.checks.size() == 2);
}

TEST_CASE("provides clause is mandatory") {
    auto res = parse_library("template T() { properties a; }");
    CHECK(any_message(res.diagnostics, "has no 'provides' clause"));
}

TEST_CASE("clause order violations are diagnosed but clauses still recorded") {
    auto res = parse_library(R"(template T() {
  requires IMemory mem;
  provides IFoo;
  properties a;
})");
    CHECK(any_message(res.diagnostics, "'provides' clause must come first"));
    CHECK(any_message(res.diagnostics, "'properties' clause must precede"));
    REQUIRE(res.library.templates.size() == 1);
    CHECK(res.library.templates[0].provides == std::vector<std::string>{"IFoo"});
    CHECK(res.library.templates[0].properties == std::vector<std::string>{"a"});
    CHECK(res.library.templates[0].requirements.size() == 1);
}

TEST_CASE("parser recovers at semicolons and keeps later templates") {
    auto res = parse_library(R"(
template Broken() {
  provides IFoo;
  check { a } subsetof ;
  check { b } accepts c;
  requires IMemory mem;
}

template Fine() {
  provides IBar;
}
)");
    CHECK(has_errors(res.diagnostics));
    CHECK(res.diagnostics.size() >= 2);
    REQUIRE(res.library.templates.size() == 2);
    CHECK(res.library.templates[1].name == "Fine");
    CHECK(any_message(res.diagnostics, "'requires' clauses must precede 'check' clauses"));
}

TEST_CASE("duplicate template names keep the first definition") {
    auto res = parse_library(R"(
template T() { provides IFoo; }
template T() { provides IBar; }
)");
    CHECK(any_message(res.diagnostics, "duplicate template name 'T'"));
    REQUIRE(res.library.templates.size() == 1);
    CHECK(res.library.templates[0].provides == std::vector<std::string>{"IFoo"});
}

TEST_CASE("unresolvable check references are dropped with diagnostics") {
    auto res = parse_library(R"(template T(a) {
  provides IFoo;
  requires IMemory mem;
  check { p } subsetof ghost.properties;
  check mem.slot accepts ghost;
  check a.slot accepts mem;
  check { p } subsetof a.properties;
})");
    CHECK(any_message(res.diagnostics, "cannot resolve 'ghost'"));
    CHECK(any_message(res.diagnostics, "must be a requirement, not a parameter"));
    REQUIRE(res.library.templates.size() == 1);
    // Only the last check survives resolution.
    CHECK(res.library.templates[0].checks.size() == 1);
}

TEST_CASE("accepts slot must be requirement.parameter") {
    auto res = parse_problem(R"(problem P {
  requires IFoo x;
  check x.a.b accepts x;
})");
    CHECK(any_message(res.diagnostics, "must be of the form requirement.parameter"));
    CHECK(res.problem.checks.empty());
}

TEST_CASE("a bare entity cannot be a subsetof side") {
    auto res = parse_problem(R"(problem P {
  requires IFoo x;
  check x subsetof { a };
})");
    CHECK(any_message(res.diagnostics, "left side of 'subsetof'"));
}

TEST_CASE("problems without requirements warn") {
    auto res = parse_problem("problem Hollow { }");
    CHECK(!has_errors(res.diagnostics));
    CHECK(any_message(res.diagnostics, "declares no requirements", Severity::Warning));
}

TEST_CASE("duplicate names within a scope are errors") {
    auto lib = parse_library("template T(a, a) { provides IFoo; }");
    CHECK(any_message(lib.diagnostics, "duplicate parameter name 'a'"));
    auto lib2 = parse_library(R"(template T(a) {
  provides IFoo;
  requires IMemory a;
})");
    CHECK(any_message(lib2.diagnostics, "collides with a parameter"));
    auto prob = parse_problem(R"(problem P {
  requires IFoo x;
  requires IBar x;
})");
    CHECK(any_message(prob.diagnostics, "duplicate requirement name 'x'"));
}

TEST_CASE("empty set literals parse") {
    auto res = parse_problem(R"(problem P {
  requires IFoo x;
  check x.properties subsetof { };
})");
    REQUIRE(!has_errors(res.diagnostics));
    const auto& sc = std::get<SubsetCheck>(res.problem.checks.at(0).node);
    CHECK(sc.rhs.kind == SetExpr::Kind::Literal);
    CHECK(sc.rhs.items.empty());
}

TEST_CASE("bundled fixtures parse cleanly") {
    auto lib = ts::parse_library_ok(ts::read_file_or_throw(ts::fixture_path("solver_components.adl")));
    CHECK(lib.templates.size() == 6);
    auto prob = ts::parse_problem_ok(ts::read_file_or_throw(ts::fixture_path("simple_sum.adl")));
    CHECK(prob.requirements.size() == 7);
    CHECK(prob.checks.size() == 10);
}
