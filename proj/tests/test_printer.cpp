#include <doctest.h>

#include "confweave/parser.hpp"
#include "confweave/printer.hpp"
#include "test_support.hpp"

using namespace confweave;
namespace ts = confweave::testsupport;

TEST_CASE("pretty_print renders the canonical form") {
    auto lib = ts::parse_library_ok(R"(template   A ( x,y )
{ provides IFoo ;
  check {p,q} subsetof x.properties; }
template B() { provides IBar; }
)");
    CHECK(pretty_print(lib) ==
          "template A(x, y) {\n"
          "  provides IFoo;\n"
          "  check { p, q } subsetof x.properties;\n"
          "}\n"
          "\n"
          "template B() {\n"
          "  provides IBar;\n"
          "}\n");
}

TEST_CASE("pretty_print of an empty library is empty") {
    CHECK(pretty_print(ComponentLibrary{}).empty());
}

TEST_CASE("printing and reparsing preserves structure") {
    auto lib = ts::parse_library_ok(ts::read_file_or_throw(ts::fixture_path("solver_components.adl")));
    auto prob = ts::parse_problem_ok(ts::read_file_or_throw(ts::fixture_path("simple_sum.adl")));

    auto lib2 = ts::parse_library_ok(pretty_print(lib));
    auto prob2 = ts::parse_problem_ok(pretty_print(prob));
    CHECK(same_structure(lib, lib2));
    CHECK(same_structure(prob, prob2));
    // Canonical text is a fixed point.
    CHECK(pretty_print(lib2) == pretty_print(lib));
    CHECK(pretty_print(prob2) == pretty_print(prob));
}

TEST_CASE("render_check covers every check shape") {
    auto prob = ts::parse_problem_ok(R"(problem P {
  requires IFoo x;
  requires IFoo y;
  check { a } subsetof x.properties;
  check x.provides subsetof { IFoo, IBar };
  check x.slot accepts y;
  check x.slot accepts y with { a, b };
  check x.properties subsetof { };
})");
    REQUIRE(prob.checks.size() == 5);
    CHECK(render_check(prob.checks[0]) == "{ a } subsetof x.properties");
    CHECK(render_check(prob.checks[1]) == "x.provides subsetof { IFoo, IBar }");
    CHECK(render_check(prob.checks[2]) == "x.slot accepts y");
    CHECK(render_check(prob.checks[3]) == "x.slot accepts y with { a, b }");
    CHECK(render_check(prob.checks[4]) == "x.properties subsetof { }");
}
