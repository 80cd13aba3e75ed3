#pragma once
// Random FD systems over <= 3 variables with domains inside 0..6, and a
// brute-force enumeration of their solutions.

#include "cclnc/fd.hpp"

#include <random>
#include <set>
#include <vector>

namespace fdgen {

using namespace cclnc;

struct FdGen {
    std::mt19937_64 rng;
    std::vector<ExprP> vs;
    explicit FdGen(std::uint64_t seed) : rng(seed) {
        for (const char* n : {"X", "Y", "Z"}) vs.push_back(mk_var(n, BaseType::Int));
    }
    int pick(int n) { return static_cast<int>(rng() % static_cast<std::uint64_t>(n)); }
    ExprP term() { return pick(3) ? vs[static_cast<std::size_t>(pick(3))] : mk_int(pick(7)); }
    Atom atom() {
        static const Prim ar[] = {Prim::FAdd, Prim::FSub, Prim::FMul, Prim::FDiv};
        switch (pick(6)) {
        case 0: return Atom::eq(term(), term());
        case 1: return Atom::neq(term(), term());
        case 2: return Atom::make(Prim::FLe, {term(), term()}, mk_bool(pick(2)));
        case 3: {
            std::vector<ExprP> vals;
            for (int i = 0, k = 1 + pick(4); i < k; ++i) vals.push_back(mk_int(pick(7)));
            return Atom::make(Prim::Belongs, {vs[static_cast<std::size_t>(pick(3))], mk_list(vals)}, mk_bool(true));
        }
        default: return Atom::make(ar[pick(4)], {term(), term()}, term());
        }
    }
    // domain vs 0 k, one to three atoms, labeling vs
    std::vector<Atom> system() {
        std::vector<Atom> pi;
        pi.push_back(Atom::make(Prim::Domain, {mk_list(vs), mk_int(0), mk_int(pick(7))}, mk_bool(true)));
        for (int k = 0, n = 1 + pick(3); k < n; ++k) pi.push_back(atom());
        pi.push_back(Atom::make(Prim::Labeling, {mk_list({}), mk_list(vs)}, mk_bool(true)));
        return pi;
    }
};

using Point = std::vector<std::int64_t>;

inline std::set<Point> brute(const std::vector<Atom>& pi, const std::vector<ExprP>& vs) {
    std::set<Point> out;
    for (int x = 0; x <= 6; ++x)
        for (int y = 0; y <= 6; ++y)
            for (int z = 0; z <= 6; ++z) {
                Subst s;
                s.bind(vs[0], mk_int(x));
                s.bind(vs[1], mk_int(y));
                s.bind(vs[2], mk_int(z));
                bool ok = true;
                for (const auto& a : pi) {
                    if (a.prim == Prim::Labeling) continue;
                    auto v = fd_eval(apply_subst(a, s));
                    ok = ok && v && *v;
                }
                if (ok) out.insert({x, y, z});
            }
    return out;
}

// labeled leaves of solve_fd; false if a leaf leaves some variable unbound
inline bool labeled(const std::vector<Atom>& pi, const std::vector<ExprP>& vs, std::set<Point>& out) {
    for (const auto& leaf : solve_fd(pi)) {
        Point v;
        for (const auto& x : vs) {
            const ExprP* b = leaf.sigma.lookup(x->id);
            if (!b || (*b)->kind != ExprKind::Int) return false;
            v.push_back((*b)->ival);
        }
        out.insert(v);
    }
    return true;
}

}  // namespace fdgen
