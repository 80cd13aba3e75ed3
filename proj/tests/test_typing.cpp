#include "common.hpp"

#include <doctest.h>

#include <random>

using namespace cclnc;
using namespace testutil;

TEST_CASE("infer examples") {
    const Program& p = bothin();
    CHECK(show(infer(p, {}, p.fun_sym("square"))) == "int -> (int, int) -> bool");

    ExprP X = mk_var("X");
    CHECK(show(infer(p, {{X->id, t_int()}}, X)) == "int");

    Parsed g = parse(p, "domain [true] 0 3");
    CHECK_THROWS_AS(check_goal(p, g.g), TypeError);
}

TEST_CASE("check_program") {
    CHECK_NOTHROW(load_program(std::string(CCLNC_PROGRAM_DIR) + "/bothin.toy"));
    CHECK_THROWS_AS(program("bad :: int -> int.\nbad X = X + true.\n"), TypeError);
    CHECK_THROWS_AS(program("bad X = X #+ true.\n"), TypeError);
    Program p = parse_program("f :: int -> bool.\nf X :- Y == 3.\n");
    CHECK(check_program(p).empty());
}

TEST_CASE("declared types are checked against the rules") {
    CHECK_THROWS_AS(program("f :: int -> bool.\nf X = X.\n"), TypeError);
    CHECK_NOTHROW(program("f :: int -> int.\nf X = X #+ 1.\n"));
}

TEST_CASE("inferred principal types without declarations") {
    Program p = program("data t = a | b.\nid X = X.\nk X Y = X.\n");
    CHECK(types_equal_upto_renaming(p.fun("id")->principal, tfun(tvar("A"), tvar("A"))));
    CHECK(types_equal_upto_renaming(p.fun("k")->principal, tfun({tvar("A"), tvar("B")}, tvar("A"))));
}

TEST_CASE("opacity") {
    Program p = program("snd :: A -> B -> B.\nsnd X Y = Y.\n");
    CHECK(is_opaque(p, p.fun_sym("snd"), 1));
    CHECK_FALSE(is_opaque(p, cons_sym(), 2));
    // tvar(A, B) is not included in tvar(B): snd is 2-opaque as well
    CHECK(is_opaque(p, p.fun_sym("snd"), 2));
    CHECK_FALSE(is_opaque(p, p.fun_sym("snd"), 0));
}

TEST_CASE("inference is stable under renaming of type variables") {
    Program p1 = program("f :: A -> [A] -> [A].\nf X Xs = X : Xs.\n");
    Program p2 = program("f :: Q -> [Q] -> [Q].\nf X Xs = X : Xs.\n");
    CHECK(types_equal_upto_renaming(p1.fun("f")->principal, p2.fun("f")->principal));
    CHECK(types_equal_upto_renaming(infer(p1, {}, p1.fun_sym("f")), infer(p2, {}, p2.fun_sym("f"))));
}

TEST_CASE("type preservation under the information ordering") {
    // replacing subterms by bottom keeps the term typable at the same type
    const Program& p = bothin();
    Parsed g = parse(p, "bothIn (triangle (2, 2.5) 2 1) (square 4) (X, Y) == true");
    ExprP e = g.atoms()[0].args[0];
    TypeEnv env = {{g.id("X"), t_int()}, {g.id("Y"), t_int()}};
    TypeP t = infer(p, env, e);
    std::mt19937_64 rng(1);
    std::function<ExprP(const ExprP&)> approx = [&](const ExprP& x) -> ExprP {
        if (rng() % 4 == 0) return mk_bottom();
        if (is_app(x)) return mk_app(approx(x->fun), approx(x->arg));
        return x;
    };
    for (int i = 0; i < 50; ++i) {
        ExprP a = approx(e);
        REQUIRE(info_leq(a, e));
        TypeP ta;
        CHECK_NOTHROW(ta = infer(p, env, a));
    }
    CHECK(show(t) == "bool");
}
