#pragma once
// Random Herbrand stores over data t = a | b | c t | d t t, and a ground
// enumeration oracle for their solutions.

#include "common.hpp"

#include "cclnc/herbrand.hpp"

#include <functional>
#include <random>

namespace hgen {

using namespace cclnc;

inline const Program& prog() {
    static Program p = testutil::program("data t = a | b | c t | d t t.\n");
    return p;
}

struct Gen {
    std::mt19937_64 rng;
    std::vector<ExprP> vars;  // of type t
    ExprP R = mk_var("R");    // bool
    explicit Gen(std::uint64_t seed) : rng(seed) {
        for (const char* n : {"X", "Y", "Z"}) vars.push_back(mk_var(n));
    }
    int pick(int n) { return static_cast<int>(rng() % static_cast<std::uint64_t>(n)); }

    ExprP term(int depth) {
        const Program& p = prog();
        int k = pick(depth > 0 ? 7 : 4);
        switch (k) {
        case 0:
        case 1: return vars[static_cast<std::size_t>(pick(static_cast<int>(vars.size())))];
        case 2: return p.con_sym("a");
        case 3: return p.con_sym("b");
        case 4:
        case 5: return mk_app(p.con_sym("c"), term(depth - 1));
        default: return mk_apps(p.con_sym("d"), {term(depth - 1), term(depth - 1)});
        }
    }

    Atom atom(int depth) {
        int k = pick(5);
        ExprP l = term(depth), r = term(depth);
        if (k < 2) return Atom::eq(l, r);
        if (k < 4) return Atom::neq(l, r);
        return Atom::make(Prim::Eq, {l, r}, R);
    }

    std::vector<Atom> store(int max_atoms, int depth) {
        std::vector<Atom> pi;
        int n = 1 + pick(max_atoms);
        for (int i = 0; i < n; ++i) pi.push_back(atom(depth));
        return pi;
    }

    std::set<VarId> chi(const std::vector<Atom>& pi) {
        std::set<VarId> out;
        for (VarId x : cvar(pi))
            if (pick(2)) out.insert(x);
        return out;
    }
};

// ground terms of depth <= 1
inline const std::vector<ExprP>& universe() {
    static std::vector<ExprP> u = [] {
        const Program& p = prog();
        std::vector<ExprP> leaves = {p.con_sym("a"), p.con_sym("b")};
        std::vector<ExprP> out = leaves;
        for (const auto& l : leaves) out.push_back(mk_app(p.con_sym("c"), l));
        for (const auto& l : leaves)
            for (const auto& r : leaves) out.push_back(mk_apps(p.con_sym("d"), {l, r}));
        return out;
    }();
    return u;
}

inline bool ground_holds(const Atom& a) {
    if (a.kind == Atom::Kind::True) return true;
    if (a.kind == Atom::Kind::False) return false;
    bool same = expr_eq(a.args[0], a.args[1]);
    if (a.result->kind != ExprKind::Bool) return false;
    return a.result->bval == same;
}

inline bool all_hold(const std::vector<Atom>& pi, const Subst& s) {
    for (const auto& a : pi)
        if (!ground_holds(apply_subst(a, s))) return false;
    return true;
}

// Enumerates valuations of vs (R over booleans, others over the universe).
inline void enumerate(const std::vector<ExprP>& vs, VarId bool_var, const std::function<void(const Subst&)>& f,
                      std::size_t k = 0, Subst s = {}) {
    if (k == vs.size()) {
        f(s);
        return;
    }
    static const std::vector<ExprP> bools = {mk_bool(true), mk_bool(false)};
    const auto& dom = vs[k]->id == bool_var ? bools : universe();
    for (const auto& v : dom) {
        Subst t = s;
        t.bind(vs[k], v);
        enumerate(vs, bool_var, f, k + 1, t);
    }
}

// Every ground solution of every output store, read back through its
// answer substitution, solves the input store. Returns the number of
// violations; stores with more than max_free free variables are skipped.
inline int soundness_violations(const std::vector<Atom>& input, const HSolveResult& out, VarId bool_var,
                                std::size_t max_free, bool* skipped) {
    std::set<VarId> in_vars;
    for (const auto& a : input) collect_vars(a, in_vars);
    int bad = 0;
    for (const auto& st : out.stores) {
        std::map<VarId, ExprP> free;
        for (const auto& a : st.atoms) collect_vars(a, free);
        for (const auto& [x, b] : st.sigma.bindings()) collect_vars(b.second, free);
        std::map<VarId, ExprP> in_free;
        for (const auto& a : input) collect_vars(a, in_free);
        for (const auto& [x, v] : in_free)
            if (!st.sigma.binds(x)) free.emplace(x, v);
        for (const auto& [x, b] : st.sigma.bindings()) free.erase(x);
        if (free.size() > max_free) {
            *skipped = true;
            continue;
        }
        std::vector<ExprP> vs;
        for (auto& [x, v] : free) vs.push_back(v);
        enumerate(vs, bool_var, [&](const Subst& eta) {
            if (!all_hold(st.atoms, eta)) return;
            Subst full = compose(st.sigma, eta);
            if (!all_hold(input, full)) ++bad;
        });
    }
    return bad;
}

}  // namespace hgen
