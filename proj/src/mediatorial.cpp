#include "cclnc/mediatorial.hpp"

namespace cclnc {

namespace {

bool int_side(const ExprP& e) { return is_var(e) || e->kind == ExprKind::Int; }
bool real_side(const ExprP& e) { return is_var(e) || is_numeric(e); }

Rat rat_floor(const Rat& q) {
    mpz_class f;
    mpz_fdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return Rat(f);
}

ExprP int_expr(const Rat& q) { return mk_int(q.get_num().get_si()); }

// One reduction on the leftmost reducible atom. Returns false if irreducible.
// out empty + true = failure.
bool m_step(const MBranch& b, const Rat& eps, std::vector<MBranch>& out) {
    for (std::size_t i = 0; i < b.atoms.size(); ++i) {
        const Atom& a = b.atoms[i];
        if (a.kind == Atom::Kind::False) return true;
        auto rebuild = [&](std::vector<Atom> repl, const Subst& s1, const char* rule) {
            MBranch n;
            Store st;
            for (std::size_t k = 0; k < b.atoms.size(); ++k) {
                if (k == i) {
                    for (auto& r : repl) st.add(s1.empty() ? r : apply_subst(r, s1));
                } else {
                    st.add(s1.empty() ? b.atoms[k] : apply_subst(b.atoms[k], s1));
                }
            }
            n.atoms = std::move(st.atoms);
            n.sigma = s1.empty() ? b.sigma : compose(b.sigma, s1);
            n.rules = b.rules;
            n.rules.push_back(rule);
            out.push_back(std::move(n));
        };
        if (a.kind == Atom::Kind::True) {
            rebuild({}, {}, "TRUE");
            return true;
        }
        if (!is_m_atom(a)) continue;
        const ExprP& t = a.args[0];
        const ExprP& s = a.args[1];
        if (is_var(a.result)) {
            Subst s1, s2;
            s1.bind(a.result, mk_bool(true));
            s2.bind(a.result, mk_bool(false));
            rebuild({Atom::bridge(t, s)}, s1, "M1");
            rebuild({Atom::make(Prim::SEq, {t, s}, mk_bool(false))}, s2, "M2");
            return true;
        }
        bool positive = a.result_is(true);
        if (positive) {
            if (is_var(t) && is_numeric(s)) {
                auto u = m_integer_mate(*numeric_value(s), eps);
                if (!u) return true;  // M4
                Subst s1;
                s1.bind(t, int_expr(*u));
                rebuild({}, s1, "M3");
                return true;
            }
            if (!is_var(t) && is_var(s)) {
                Subst s1;
                s1.bind(s, mk_real(*numeric_value(t)));
                rebuild({}, s1, "M5");
                return true;
            }
            if (!is_var(t) && !is_var(s)) {
                if (m_equiv(*numeric_value(t), *numeric_value(s), eps))
                    rebuild({}, {}, "M6");
                return true;  // M7 otherwise
            }
        } else if (!is_var(t) && !is_var(s)) {
            if (!m_equiv(*numeric_value(t), *numeric_value(s), eps))
                rebuild({}, {}, "M8");
            return true;  // M9 otherwise
        }
    }
    return false;
}

}  // namespace

bool is_m_atom(const Atom& a) {
    if (!a.is_prim() || a.prim != Prim::SEq || a.args.size() != 2) return false;
    if (!int_side(a.args[0]) || !real_side(a.args[1])) return false;
    return is_var(a.result) || a.result->kind == ExprKind::Bool;
}

bool m_equiv(const Rat& u, const Rat& u2, const Rat& epsilon) {
    Rat d = u2 - u;
    if (d < 0) d = -d;
    return d <= epsilon;
}

std::optional<Rat> m_integer_mate(const Rat& u2, const Rat& epsilon) {
    Rat n = rat_floor(u2 + Rat(1, 2));
    if (m_equiv(n, u2, epsilon)) return n;
    return std::nullopt;
}

std::vector<MBranch> solve_m(const std::vector<Atom>& pi, const Rat& epsilon) {
    std::vector<MBranch> done, stack;
    MBranch init;
    for (const auto& a : pi) {
        Store st;
        st.atoms = init.atoms;
        st.add(a);
        init.atoms = std::move(st.atoms);
    }
    stack.push_back(std::move(init));
    while (!stack.empty()) {
        MBranch cur = std::move(stack.back());
        stack.pop_back();
        std::vector<MBranch> succ;
        if (!m_step(cur, epsilon, succ)) {
            done.push_back(std::move(cur));
            continue;
        }
        for (auto it = succ.rbegin(); it != succ.rend(); ++it) stack.push_back(std::move(*it));
    }
    return done;
}

bool is_solved_m(const std::vector<Atom>& pi, const Rat& epsilon) {
    MBranch b;
    b.atoms = pi;
    std::vector<MBranch> out;
    return !m_step(b, epsilon, out);
}

std::optional<ExprP> bridge_lookup(const std::vector<Atom>& B, BridgeSide side, const ExprP& v) {
    if (!is_var(v)) return std::nullopt;
    for (const auto& a : B) {
        if (!a.is_bridge()) continue;
        const ExprP& l = a.args[0];
        const ExprP& r = a.args[1];
        if (side == BridgeSide::Left && is_var(l) && l->id == v->id) return r;
        if (side == BridgeSide::Right && is_var(r) && r->id == v->id) return l;
    }
    return std::nullopt;
}

std::vector<Atom> bridges_of(const std::vector<Atom>& pi) {
    std::vector<Atom> out;
    for (const auto& a : pi)
        if (a.is_bridge()) out.push_back(a);
    return out;
}

}  // namespace cclnc
