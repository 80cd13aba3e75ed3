#include "common.hpp"

#include <doctest.h>

#include <filesystem>

using namespace cclnc;
using namespace testutil;

TEST_CASE("the bothIn program") {
    const Program& p = bothin();
    CHECK(p.funs.size() == 6);
    for (const char* f : {"isIn", "bothIn", "square", "triangle", "diagonal", "parabola"}) CHECK(p.fun(f));
    // clause sugar: bothIn ... -> true with its conditions
    const Rule& r = p.fun("bothIn")->rules.at(0);
    CHECK(show(r.rhs) == "true");
    CHECK(r.cond.size() == 5);
    // boolean conditions become == true
    const Rule& isin = p.fun("isIn")->rules.at(0);
    CHECK(show(isin.rhs) == "Set Element");
}

TEST_CASE("pretty printing round trips") {
    Program p = parse_program("f X = X.\n");
    std::string once = print_program(p);
    CHECK(print_program(parse_program(once)) == once);

    for (const auto& entry : std::filesystem::directory_iterator(CCLNC_PROGRAM_DIR)) {
        if (entry.path().extension() != ".toy") continue;
        Program a = load_program(entry.path().string());
        std::string t1 = print_program(a);
        Program b = parse_program(t1);
        check_program(b);
        CHECK_MESSAGE(print_program(b) == t1, entry.path().string());
    }
}

TEST_CASE("non-linear heads are rejected") {
    CHECK_THROWS_AS(parse_program("g X X = X.\n"), SyntaxError);
}

TEST_CASE("syntax errors carry file:line:col") {
    try {
        parse_program("f X = X.\ng Y = (Y.\n", "p.toy");
        FAIL("no error");
    } catch (const SyntaxError& e) {
        CHECK(std::string(e.what()).rfind("p.toy:2:", 0) == 0);
        CHECK(e.loc().line == 2);
    }
}

TEST_CASE("goals") {
    const Program& p = bothin();
    ParsedGoal g = parse_goal(p, "bothIn (triangle (2,2.5) 2 1) (square 4) (X,Y)");
    REQUIRE(g.constraints.size() == 1);
    CHECK(g.constraints[0].is_eq());
    CHECK(show(g.constraints[0].args[1]) == "true");
    REQUIRE(g.vars.size() == 2);
    CHECK(*g.vars[0]->name == "X");
    CHECK(*g.vars[1]->name == "Y");

    CHECK_THROWS_AS(parse_goal(p, ""), SyntaxError);

    ParsedGoal h = parse_goal(p, "X #== RX, RX > 4.3");
    REQUIRE(h.constraints.size() == 2);
    CHECK(h.constraints[0].is_bridge());
    // RX > 4.3 is RX <= 4.3 ->! false
    CHECK(h.constraints[1].prim == Prim::RLe);
    CHECK(h.constraints[1].result_is(false));
}

TEST_CASE("constraint sugar") {
    Program p = program("");
    ParsedGoal g = parse_goal(p, "A == B, A /= B, X #< Y, X #>= Y, RX < RY, RX >= RY, X #+ Y ->! Z");
    const auto& c = g.constraints;
    CHECK(c[0].prim == Prim::Eq);
    CHECK(c[0].result_is(true));
    CHECK(c[1].result_is(false));
    CHECK(show(c[2]) == "X #< Y");
    CHECK(c[2].prim == Prim::FLe);
    CHECK(show(c[3]) == "Y #<= X");
    CHECK(show(c[4]) == "RX < RY");
    CHECK(show(c[5]) == "RY <= RX");
    CHECK(show(c[6]) == "X #+ Y ->! Z");
    // decimal literals are exact rationals
    ParsedGoal r = parse_goal(p, "RX == 0.1");
    CHECK(*numeric_value(r.constraints[0].args[1]) == Rat(1, 10));
}
