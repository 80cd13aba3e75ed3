#include "common.hpp"

#include "cclnc/fd.hpp"
#include "fdgen.hpp"

#include <doctest.h>

#include <functional>
#include <random>

using namespace cclnc;
using namespace testutil;

namespace {

Parsed fd(const std::string& text) {
    static Program p = program("");
    return parse(p, text, true);
}

FDStore posted(const Parsed& g, bool* ok = nullptr) {
    FDStore s;
    bool good = true;
    for (const auto& a : g.atoms()) good = good && s.post(a);
    good = good && s.propagate();
    if (ok) *ok = good;
    return s;
}

std::string value_of(const FDStore& s, const ExprP& v) {
    if (const ExprP* b = s.sigma().lookup(v->id)) return show(*b);
    return show(*s.domain(v));
}

}  // namespace

TEST_CASE("domain posting") {
    bool ok = true;
    posted(fd("domain [X] 5 3"), &ok);
    CHECK_FALSE(ok);

    Parsed g = fd("domain [X, Y] 0 4");
    FDStore s = posted(g, &ok);
    CHECK(ok);
    CHECK(*s.domain(g.v("X")) == FDDomain{0, 4, {}});
    CHECK(*s.domain(g.v("Y")) == FDDomain{0, 4, {}});

    Parsed h = fd("domain [X] 0 4, X /= 3");
    FDStore t = posted(h, &ok);
    CHECK(*t.domain(h.v("X")) == FDDomain{0, 4, {3}});
}

TEST_CASE("propagation to a fixpoint") {
    Parsed g = fd("domain [X] 0 10, X #<= 3, X #>= 2");
    FDStore s = posted(g);
    CHECK(*s.domain(g.v("X")) == FDDomain{2, 3, {}});

    // the goal2 system prunes to the singleton d
    for (int n : {4, 100, 10000}) {
        int d = n / 2;
        std::string t = "domain [X, Y] 0 " + std::to_string(n) + ", Y #>= " + std::to_string(d) +
                         ", Y #- X ->! B, B #<= 0, Y #+ X ->! C, C #<= " + std::to_string(n);
        Parsed h = fd(t);
        FDStore u = posted(h);
        CHECK(value_of(u, h.v("X")) == std::to_string(d));
        CHECK(value_of(u, h.v("Y")) == std::to_string(d));
    }

    FDStore empty;
    CHECK(empty.propagate());
    CHECK(empty.residual().empty());
}

TEST_CASE("labeling enumerates (n+1)^2 leaves") {
    for (int n : {2, 4, 6}) {
        Parsed g = fd("domain [X, Y] 0 " + std::to_string(n));
        FDStore s = posted(g);
        auto naive = label(s, LabelStrategy::Naive, {g.v("X"), g.v("Y")});
        CHECK(naive.leaves.size() == static_cast<std::size_t>((n + 1) * (n + 1)));
        auto ff = label(s, LabelStrategy::FirstFail, {g.v("X"), g.v("Y")});
        CHECK(ff.leaves.size() == naive.leaves.size());
    }
}

TEST_CASE("labeling singleton domains costs one choice per variable") {
    Parsed g = fd("domain [X, Y] 2 2");
    FDStore s = posted(g);
    auto r = label(s, LabelStrategy::Naive, {g.v("X"), g.v("Y")});
    CHECK(r.leaves.size() == 1);
    CHECK(r.choices == 2);
}

TEST_CASE("labeling an unbounded variable is an error") {
    Parsed g = fd("X #<= 3");
    FDStore s = posted(g);
    CHECK_THROWS_AS(label(s, LabelStrategy::Naive, {g.v("X")}), FDError);
    Parsed h = fd("labeling [] [X]");
    CHECK_THROWS_AS(solve_fd(h.atoms()), FDError);
}

TEST_CASE("solve_fd examples") {
    auto r0 = solve_fd({});
    REQUIRE(r0.size() == 1);
    CHECK(r0[0].atoms.empty());

    Parsed g = fd("domain [X] 0 1, labeling [] [X]");
    auto r = solve_fd(g.atoms());
    REQUIRE(r.size() == 2);
    CHECK(show(*r[0].sigma.lookup(g.id("X"))) == "0");
    CHECK(show(*r[1].sigma.lookup(g.id("X"))) == "1");

    Parsed h = fd("X #== RX");
    CHECK_THROWS_AS(solve_fd(h.atoms()), FDError);
}

TEST_CASE("first-fail picks the smallest domain") {
    Parsed g = fd("domain [X] 0 9, domain [Y] 0 2, labeling [ff] [X, Y]");
    FDStore s = posted(g);
    auto pick = s.next_label();
    REQUIRE(pick);
    CHECK(*pick->var->name == "Y");
    auto naive = s.next_label(LabelStrategy::Naive);
    CHECK(*naive->var->name == "X");
}

TEST_CASE("division truncates toward zero, zero divisor fails") {
    auto div = [](int a, int b, int c) { return fd_eval(Atom::make(Prim::FDiv, {mk_int(a), mk_int(b)}, mk_int(c))); };
    CHECK(*div(7, 2, 3));
    CHECK(*div(-7, 2, -3));
    CHECK_FALSE(*div(-7, 2, -4));
    CHECK_FALSE(*div(7, 0, 0));
    Parsed g = fd("domain [X] 0 0, 7 #/ X ->! Y");
    bool ok = true;
    posted(g, &ok);
    CHECK_FALSE(ok);
}

// Random systems over <= 3 variables with domains inside 0..6: the labeled
// leaves are exactly the brute-force solutions.
TEST_CASE("labeled leaves equal brute-force solutions on random systems") {
    fdgen::FdGen g(31);
    for (int i = 0; i < 300; ++i) {
        auto pi = g.system();
        std::set<fdgen::Point> got;
        REQUIRE(fdgen::labeled(pi, g.vs, got));
        CHECK_MESSAGE(got == fdgen::brute(pi, g.vs), show(pi));
    }
}
