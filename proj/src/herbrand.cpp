#include "cclnc/herbrand.hpp"

#include "cclnc/typing.hpp"

#include <functional>
#include <map>

namespace cclnc {

namespace {

bool has_head(const ExprP& e) { return !is_var(e); }

bool same_head(const ExprP& a, const ExprP& b) {
    return nargs(a) == nargs(b) && expr_eq(head(a), head(b));
}

bool meets(const std::set<VarId>& chi, const ExprP& e) {
    if (chi.empty()) return false;
    std::set<VarId> vs;
    collect_vars(e, vs);
    for (auto v : vs)
        if (chi.count(v)) return true;
    return false;
}

bool is_full_constructor(const ExprP& e) {
    ExprP h = head(e);
    return h->kind == ExprKind::Sym && h->skind == SymKind::Constructor && nargs(e) == h->arity;
}

bool nullary_symbol_or_var(const ExprP& e) { return is_var(e) || e->kind == ExprKind::Sym; }

HStore rewrite(const HStore& s, std::size_t idx, const std::vector<Atom>& repl, const Subst& s1) {
    HStore r;
    r.flags = s.flags;
    std::vector<Atom> atoms;
    for (std::size_t i = 0; i < s.atoms.size(); ++i) {
        if (i == idx) {
            for (const auto& a : repl) atoms.push_back(a);
        } else {
            atoms.push_back(s.atoms[i]);
        }
    }
    Store tmp;
    for (const auto& a : atoms) tmp.add(s1.empty() ? a : apply_subst(a, s1));
    r.atoms = std::move(tmp.atoms);
    r.sigma = s1.empty() ? s.sigma : compose(s.sigma, s1);
    return r;
}

std::vector<HSuccessor> atom_successors(const Program& prog, const HStore& s, std::size_t idx,
                                        const std::set<VarId>& chi, bool names_only,
                                        std::vector<std::string>* names) {
    std::vector<HSuccessor> out;
    const Atom& a = s.atoms[idx];
    if (!is_herbrand_atom(a)) return out;
    auto note = [&](const std::string& n) {
        if (names) names->push_back(n);
    };
    auto fail = [&](const std::string& n) {
        note(n);
        if (!names_only) out.push_back({true, n, {}});
    };
    const ExprP& t = a.args[0];
    const ExprP& u = a.args[1];

    if (is_var(a.result)) {
        note("H1");
        note("H2");
        if (names_only) return out;
        Subst s1, s2;
        s1.bind(a.result, mk_bool(true));
        s2.bind(a.result, mk_bool(false));
        out.push_back({false, "H1", rewrite(s, idx, {Atom::eq(t, u)}, s1)});
        out.push_back({false, "H2", rewrite(s, idx, {Atom::neq(t, u)}, s2)});
        return out;
    }

    if (a.result_is(true)) {
        if (has_head(t) && has_head(u)) {
            if (same_head(t, u)) {
                note("H3");
                if (names_only) return out;
                auto ta = args(t), ua = args(u);
                std::vector<Atom> eqs;
                for (std::size_t i = 0; i < ta.size(); ++i) eqs.push_back(Atom::eq(ta[i], ua[i]));
                HStore n = rewrite(s, idx, eqs, {});
                if (!ta.empty() && is_opaque(prog, head(t), static_cast<int>(ta.size())))
                    n.flags.opaque_decomposition_used = true;
                out.push_back({false, "H3", std::move(n)});
            } else {
                fail("H3c");
            }
            return out;
        }
        if (has_head(t) && is_var(u)) {
            note("H4");
            if (!names_only) out.push_back({false, "H4", rewrite(s, idx, {Atom::eq(u, t)}, {})});
            return out;
        }
        // t is a variable X
        if (is_var(u) && u->id == t->id) return out;
        if (occurs(t->id, u)) {
            fail("H6");
            return out;
        }
        if (!chi.count(t->id)) {
            note("H5");
            if (names_only) return out;
            std::map<VarId, ExprP> vs;
            std::vector<ExprP> order;
            std::set<VarId> seen;
            std::function<void(const ExprP&)> walk = [&](const ExprP& e) {
                if (is_var(e)) {
                    if (seen.insert(e->id).second) order.push_back(e);
                } else if (is_app(e)) {
                    walk(e->fun);
                    walk(e->arg);
                }
            };
            walk(u);
            std::vector<Atom> tot;
            for (const auto& y : order) tot.push_back(Atom::eq(y, y));
            Subst s1;
            s1.bind(t, u);
            out.push_back({false, "H5", rewrite(s, idx, tot, s1)});
        }
        return out;
    }

    if (!a.result_is(false)) return out;

    if (has_head(t) && has_head(u)) {
        if (same_head(t, u)) {
            auto ta = args(t), ua = args(u);
            if (ta.empty()) {
                fail(nullary_symbol_or_var(t) ? "H9" : "H7");
                return out;
            }
            note("H7");
            if (names_only) return out;
            bool opaque = is_opaque(prog, head(t), static_cast<int>(ta.size()));
            for (std::size_t i = 0; i < ta.size(); ++i) {
                HStore n = rewrite(s, idx, {Atom::neq(ta[i], ua[i])}, {});
                if (opaque) n.flags.opaque_decomposition_used = true;
                out.push_back({false, "H7", std::move(n)});
            }
        } else {
            note("H8");
            if (!names_only) out.push_back({false, "H8", rewrite(s, idx, {}, {})});
        }
        return out;
    }
    if (is_var(t) && is_var(u)) {
        if (t->id == u->id) fail("H9");
        return out;
    }
    if (has_head(t) && is_var(u)) {
        note("H10");
        if (!names_only) out.push_back({false, "H10", rewrite(s, idx, {Atom::neq(u, t)}, {})});
        return out;
    }
    // X /= h t1..tm
    if (chi.count(t->id) || !meets(chi, u)) return out;
    if (!is_full_constructor(u)) {
        note("H13");
        if (!names_only) {
            HSuccessor f{true, "H13", {}};
            f.store.flags.h13_used = true;
            out.push_back(std::move(f));
        }
        return out;
    }
    ExprP c = head(u);
    auto ua = args(u);
    for (std::size_t i = 0; i < ua.size(); ++i) {
        std::string name = meets(chi, ua[i]) ? "H11a" : "H11b";
        note(name);
        if (names_only) continue;
        std::vector<ExprP> zs;
        for (std::size_t k = 0; k < ua.size(); ++k) zs.push_back(mk_fresh_var("Z"));
        Subst s1;
        s1.bind(t, mk_apps(c, zs));
        out.push_back({false, name, rewrite(s, idx, {Atom::neq(zs[i], ua[i])}, s1)});
    }
    for (const auto& d : prog.sibling_constructors(c)) {
        note("H12");
        if (names_only) continue;
        std::vector<ExprP> zs;
        for (int k = 0; k < d->arity; ++k) zs.push_back(mk_fresh_var("Z"));
        Subst s1;
        s1.bind(t, mk_apps(d, zs));
        out.push_back({false, "H12", rewrite(s, idx, {}, s1)});
    }
    return out;
}

}  // namespace

bool is_herbrand_atom(const Atom& a) { return a.is_prim() && a.prim == Prim::Eq && a.args.size() == 2; }

std::set<VarId> cvar(const std::vector<Atom>& pi) {
    std::set<VarId> all, od;
    for (const auto& a : pi) {
        collect_vars(a, all);
        auto o = odvar(a);
        od.insert(o.begin(), o.end());
    }
    std::set<VarId> r;
    for (auto v : all)
        if (!od.count(v)) r.insert(v);
    return r;
}

std::vector<std::string> h_applicable(const Program& prog, const Atom& a, const std::set<VarId>& chi) {
    HStore s;
    s.atoms = {a};
    std::vector<std::string> names;
    atom_successors(prog, s, 0, chi, true, &names);
    return names;
}

std::vector<HSuccessor> h_step(const Program& prog, const HStore& s, const std::set<VarId>& chi) {
    for (std::size_t i = 0; i < s.atoms.size(); ++i) {
        if (s.atoms[i].kind == Atom::Kind::False) return {HSuccessor{true, "FALSE", {}}};
        if (s.atoms[i].kind == Atom::Kind::True) {
            HStore n = rewrite(s, i, {}, {});
            return {HSuccessor{false, "TRUE", std::move(n)}};
        }
        if (h_applicable(prog, s.atoms[i], chi).empty()) continue;
        return atom_successors(prog, s, i, chi, false, nullptr);
    }
    return {};
}

bool is_solved_h(const Program& prog, const std::vector<Atom>& pi, const std::set<VarId>& chi) {
    for (const auto& a : pi) {
        if (!a.is_prim()) return false;
        if (!h_applicable(prog, a, chi).empty()) return false;
    }
    return true;
}

HSolveResult solve_h(const Program& prog, const std::vector<Atom>& pi, const std::set<VarId>& chi,
                     std::size_t step_limit) {
    HSolveResult res;
    std::vector<HStore> stack;
    HStore init;
    init.atoms = pi;
    stack.push_back(std::move(init));
    while (!stack.empty()) {
        HStore cur = std::move(stack.back());
        stack.pop_back();
        auto succ = h_step(prog, cur, chi);
        if (succ.empty()) {
            res.flags.opaque_decomposition_used |= cur.flags.opaque_decomposition_used;
            res.flags.h13_used |= cur.flags.h13_used;
            res.stores.push_back(std::move(cur));
            continue;
        }
        if (++res.steps > step_limit) throw std::runtime_error("solve_h: step limit exceeded");
        for (auto it = succ.rbegin(); it != succ.rend(); ++it) {
            if (it->fail) {
                if (it->store.flags.h13_used) res.flags.h13_used = true;
                continue;
            }
            stack.push_back(std::move(it->store));
        }
    }
    return res;
}

std::array<long, 5> h_measure(const Program& prog, const std::vector<Atom>& pi, const std::set<VarId>& chi) {
    std::array<long, 5> m{0, 0, 0, 0, 0};
    std::set<VarId> od;
    for (const auto& a : pi) {
        auto o = odvar(a);
        od.insert(o.begin(), o.end());
    }
    std::function<void(const ExprP&, long)> depth_sum = [&](const ExprP& e, long d) {
        if (is_var(e)) {
            if (chi.count(e->id)) m[1] += d;
            return;
        }
        for (const auto& x : args(e)) depth_sum(x, d + 1);
    };
    std::function<long(const ExprP&)> od_occ = [&](const ExprP& e) -> long {
        if (is_var(e)) return od.count(e->id) ? 1 : 0;
        long n = 0;
        for (const auto& x : args(e)) n += od_occ(x);
        return n;
    };
    for (const auto& a : pi) {
        if (!a.is_prim()) continue;
        if (!h_applicable(prog, a, chi).empty()) ++m[0];
        std::vector<ExprP> pats = a.args;
        if (is_var(a.result)) pats.push_back(a.result);
        for (const auto& p : pats) {
            depth_sum(p, 0);
            m[2] += static_cast<long>(expr_size(p));
        }
        bool solved_form = a.is_eq() && is_var(a.args[0]) && is_var(a.args[1]) && a.args[0]->id == a.args[1]->id;
        if (!solved_form)
            for (const auto& p : pats) m[3] += od_occ(p);
        // misplaced: t == X or t /= X with t not a variable
        if (a.prim == Prim::Eq && (a.result_is(true) || a.result_is(false)) && is_var(a.args[1]) &&
            !is_var(a.args[0]))
            ++m[4];
    }
    return m;
}

}  // namespace cclnc
