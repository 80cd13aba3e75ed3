#include "cclnc/coordination.hpp"

#include "cclnc/mediatorial.hpp"

namespace cclnc {

namespace {

bool is_int(const ExprP& e) { return e->kind == ExprKind::Int; }

bool integral(const Rat& q) { return q.get_den() == 1; }

Rat rceil(const Rat& q) {
    mpz_class r;
    mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return Rat(r);
}
Rat rfloor(const Rat& q) {
    mpz_class r;
    mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return Rat(r);
}

ExprP to_int(const Rat& q) { return mk_int(q.get_num().get_si()); }

std::string base_name(const ExprP& v) {
    std::string n = v->name ? *v->name : "V";
    auto u = n.find_last_of('_');
    if (u != std::string::npos && u + 1 < n.size() && n.find_first_not_of("0123456789", u + 1) == std::string::npos)
        n = n.substr(0, u);
    return n;
}

ExprP real_mate(const ExprP& x) { return mk_fresh_var("R" + base_name(x), BaseType::Real); }
ExprP int_mate(const ExprP& rx) {
    std::string n = base_name(rx);
    if (n.size() > 1 && n[0] == 'R') n = n.substr(1);
    else n = "I" + n;
    return mk_fresh_var(n, BaseType::Int);
}

bool list_elems(const ExprP& l, std::vector<ExprP>& out) {
    ExprP cur = l;
    while (true) {
        if (cur->kind == ExprKind::Sym && *cur->name == "[]") return true;
        if (is_app(cur) && nargs(cur) == 2 && *head(cur)->name == ":") {
            auto as = args(cur);
            out.push_back(as[0]);
            cur = as[1];
            continue;
        }
        return false;
    }
}

bool has_left(const std::vector<Atom>& B, const ExprP& x) {
    return bridge_lookup(B, BridgeSide::Left, x).has_value();
}
bool has_right(const std::vector<Atom>& B, const ExprP& rx) {
    return bridge_lookup(B, BridgeSide::Right, rx).has_value();
}

// FD term → R term: integer constant cast, or bridged mate
std::optional<ExprP> fd_term_r(const ExprP& t, const std::vector<Atom>& B) {
    if (is_int(t)) return mk_real(Rat(t->ival));
    if (is_var(t)) return bridge_lookup(B, BridgeSide::Left, t);
    return std::nullopt;
}
// R term → FD term: integral real constant, or bridged mate
std::optional<ExprP> r_term_fd(const ExprP& t, const std::vector<Atom>& B) {
    if (is_numeric(t)) {
        Rat q = *numeric_value(t);
        if (!integral(q)) return std::nullopt;
        return to_int(q);
    }
    if (is_var(t)) return bridge_lookup(B, BridgeSide::Right, t);
    return std::nullopt;
}

void add_bridge_for(const ExprP& x, const std::vector<Atom>& B, std::vector<Atom>& out) {
    if (!is_var(x) || has_left(B, x) || has_left(out, x)) return;
    out.push_back(Atom::bridge(x, real_mate(x)));
}

std::vector<Atom> concat(const std::vector<Atom>& a, const std::vector<Atom>& b) {
    std::vector<Atom> r = a;
    r.insert(r.end(), b.begin(), b.end());
    return r;
}

Atom fd_lt(const ExprP& a, const ExprP& b) { return Atom::make(Prim::FLe, {b, a}, mk_bool(false)); }
Atom fd_le(const ExprP& a, const ExprP& b) { return Atom::make(Prim::FLe, {a, b}, mk_bool(true)); }

}  // namespace

const char* show(Specific s) {
    switch (s) {
        case Specific::FD: return "FD";
        case Specific::R: return "R";
        default: return "neither";
    }
}

bool is_proper_fd(const Atom& a) {
    if (!a.is_prim()) return false;
    switch (a.prim) {
        case Prim::FAdd: case Prim::FSub: case Prim::FMul: case Prim::FDiv: case Prim::FLe:
        case Prim::Domain: case Prim::Belongs: case Prim::Labeling:
            return true;
        default:
            return false;
    }
}

bool is_proper_r(const Atom& a) {
    if (!a.is_prim()) return false;
    switch (a.prim) {
        case Prim::RAdd: case Prim::RSub: case Prim::RMul: case Prim::RDiv: case Prim::RLe:
            return true;
        default:
            return false;
    }
}

bool is_extended_herbrand(const Atom& a) { return a.is_prim() && a.prim == Prim::Eq; }

// ---------------------------------------------------------------- FD → R

std::vector<Atom> bridges_fd_to_r(const Atom& pi, const std::vector<Atom>& B) {
    std::vector<Atom> out;
    if (!pi.is_prim()) return out;
    switch (pi.prim) {
        case Prim::Domain: {
            if (!pi.result_is(true)) break;
            std::vector<ExprP> xs;
            if (!list_elems(pi.args[0], xs)) break;
            for (const auto& x : xs) add_bridge_for(x, B, out);
            break;
        }
        case Prim::Belongs:
            if (pi.result_is(true)) add_bridge_for(pi.args[0], B, out);
            break;
        case Prim::FLe:
            if (is_var(pi.result)) break;
            add_bridge_for(pi.args[0], B, out);
            add_bridge_for(pi.args[1], B, out);
            break;
        case Prim::Eq: {
            if (is_var(pi.result)) break;
            const ExprP &a = pi.args[0], &b = pi.args[1];
            if (is_int(a) && is_var(b)) add_bridge_for(b, B, out);
            else if (is_int(b) && is_var(a)) add_bridge_for(a, B, out);
            break;
        }
        case Prim::FAdd: case Prim::FSub: case Prim::FMul:
            add_bridge_for(pi.args[0], B, out);
            add_bridge_for(pi.args[1], B, out);
            add_bridge_for(pi.result, B, out);
            break;
        default:
            break;
    }
    return out;
}

std::vector<Atom> proj_fd_to_r(const Atom& pi, const std::vector<Atom>& B) {
    std::vector<Atom> out;
    if (!pi.is_prim()) return out;
    auto rle = [](const ExprP& a, const ExprP& b) { return Atom::make(Prim::RLe, {a, b}, mk_bool(true)); };
    switch (pi.prim) {
        case Prim::Domain: {
            if (!pi.result_is(true) || !is_int(pi.args[1]) || !is_int(pi.args[2])) break;
            std::vector<ExprP> xs;
            if (!list_elems(pi.args[0], xs)) break;
            ExprP a = mk_real(Rat(pi.args[1]->ival)), b = mk_real(Rat(pi.args[2]->ival));
            for (const auto& x : xs) {
                if (!is_var(x)) continue;
                auto rx = bridge_lookup(B, BridgeSide::Left, x);
                if (!rx) continue;
                out.push_back(rle(a, *rx));
                out.push_back(rle(*rx, b));
            }
            break;
        }
        case Prim::Belongs: {
            if (!pi.result_is(true) || !is_var(pi.args[0])) break;
            std::vector<ExprP> xs;
            if (!list_elems(pi.args[1], xs) || xs.empty()) break;
            std::int64_t mn = 0, mx = 0;
            for (std::size_t i = 0; i < xs.size(); ++i) {
                if (!is_int(xs[i])) return out;
                if (i == 0 || xs[i]->ival < mn) mn = xs[i]->ival;
                if (i == 0 || xs[i]->ival > mx) mx = xs[i]->ival;
            }
            auto rx = bridge_lookup(B, BridgeSide::Left, pi.args[0]);
            if (!rx) break;
            out.push_back(rle(mk_real(Rat(mn)), *rx));
            out.push_back(rle(*rx, mk_real(Rat(mx))));
            break;
        }
        case Prim::FLe: case Prim::Eq: {
            if (is_var(pi.result)) break;
            auto a = fd_term_r(pi.args[0], B), b = fd_term_r(pi.args[1], B);
            if (!a || !b) break;
            if (is_numeric(*a) && is_numeric(*b)) break;
            out.push_back(Atom::make(pi.prim == Prim::FLe ? Prim::RLe : Prim::Eq, {*a, *b}, pi.result));
            break;
        }
        case Prim::FAdd: case Prim::FSub: case Prim::FMul: {
            auto a = fd_term_r(pi.args[0], B), b = fd_term_r(pi.args[1], B), c = fd_term_r(pi.result, B);
            if (!a || !b || !c) break;
            Prim p = pi.prim == Prim::FAdd ? Prim::RAdd : pi.prim == Prim::FSub ? Prim::RSub : Prim::RMul;
            out.push_back(Atom::make(p, {*a, *b}, *c));
            break;
        }
        default:
            break;
    }
    return out;
}

// ---------------------------------------------------------------- R → FD

std::vector<Atom> bridges_r_to_fd(const Atom& pi, const std::vector<Atom>& B) {
    std::vector<Atom> out;
    if (!pi.is_prim()) return out;
    auto integral_const = [](const ExprP& t) { return is_numeric(t) && integral(*numeric_value(t)); };
    switch (pi.prim) {
        case Prim::Eq: {
            if (!pi.result_is(true)) break;
            const ExprP &a = pi.args[0], &b = pi.args[1];
            const ExprP* v = nullptr;
            if (integral_const(a) && is_var(b)) v = &b;
            else if (integral_const(b) && is_var(a)) v = &a;
            if (v && !has_right(B, *v)) out.push_back(Atom::bridge(int_mate(*v), *v));
            break;
        }
        case Prim::RAdd: case Prim::RSub: case Prim::RMul: {
            const ExprP& t3 = pi.result;
            if (!is_var(t3) || has_right(B, t3)) break;
            bool ok = true;
            for (const auto& t : pi.args) ok = ok && (integral_const(t) || (is_var(t) && has_right(B, t)));
            if (ok) out.push_back(Atom::bridge(int_mate(t3), t3));
            break;
        }
        default:
            break;
    }
    return out;
}

std::vector<Atom> proj_r_to_fd(const Atom& pi, const std::vector<Atom>& B) {
    std::vector<Atom> out;
    if (!pi.is_prim()) return out;
    switch (pi.prim) {
        case Prim::RLe: {
            if (is_var(pi.result)) break;
            // p <= q, or (false) q < p
            bool strict = pi.result_is(false);
            const ExprP& l = strict ? pi.args[1] : pi.args[0];
            const ExprP& r = strict ? pi.args[0] : pi.args[1];
            if (is_var(l) && is_var(r)) {
                auto x = bridge_lookup(B, BridgeSide::Right, l), y = bridge_lookup(B, BridgeSide::Right, r);
                if (x && y) out.push_back(strict ? fd_lt(*x, *y) : fd_le(*x, *y));
            } else if (is_var(l) && is_numeric(r)) {
                auto x = bridge_lookup(B, BridgeSide::Right, l);
                Rat a = *numeric_value(r);
                if (x) out.push_back(strict ? fd_lt(*x, to_int(rceil(a))) : fd_le(*x, to_int(rfloor(a))));
            } else if (is_numeric(l) && is_var(r)) {
                auto y = bridge_lookup(B, BridgeSide::Right, r);
                Rat a = *numeric_value(l);
                if (y) out.push_back(strict ? fd_lt(to_int(rfloor(a)), *y) : fd_le(to_int(rceil(a)), *y));
            }
            break;
        }
        case Prim::Eq: {
            if (is_var(pi.result)) break;
            auto a = r_term_fd(pi.args[0], B), b = r_term_fd(pi.args[1], B);
            if (!a || !b || (is_int(*a) && is_int(*b))) break;
            out.push_back(Atom::make(Prim::Eq, {*a, *b}, pi.result));
            break;
        }
        case Prim::RAdd: case Prim::RSub: case Prim::RMul: {
            auto a = r_term_fd(pi.args[0], B), b = r_term_fd(pi.args[1], B), c = r_term_fd(pi.result, B);
            if (!a || !b || !c) break;
            Prim p = pi.prim == Prim::RAdd ? Prim::FAdd : pi.prim == Prim::RSub ? Prim::FSub : Prim::FMul;
            out.push_back(Atom::make(p, {*a, *b}, *c));
            break;
        }
        case Prim::RDiv: {
            auto a = r_term_fd(pi.args[0], B), b = r_term_fd(pi.args[1], B), c = r_term_fd(pi.result, B);
            if (!a || !b || !c) break;
            out.push_back(Atom::make(Prim::FMul, {*b, *c}, *a));
            break;
        }
        default:
            break;
    }
    return out;
}

ProjectionResult fd_to_r(const Atom& pi, const std::vector<Atom>& B) {
    ProjectionResult r;
    r.new_bridges = bridges_fd_to_r(pi, B);
    r.projected = proj_fd_to_r(pi, concat(B, r.new_bridges));
    return r;
}

ProjectionResult r_to_fd(const Atom& pi, const std::vector<Atom>& B) {
    ProjectionResult r;
    r.new_bridges = bridges_r_to_fd(pi, B);
    r.projected = proj_r_to_fd(pi, concat(B, r.new_bridges));
    return r;
}

// ---------------------------------------------------------------- specificity

Specific infer_specific(const std::vector<Atom>& M, const Atom& pi) {
    if (!is_extended_herbrand(pi) || is_var(pi.result)) return Specific::Neither;
    const ExprP &a = pi.args[0], &b = pi.args[1];
    auto simple = [](const ExprP& t) { return is_var(t) || is_numeric(t); };
    if (!simple(a) || !simple(b)) return Specific::Neither;
    auto fd_side = [&](const ExprP& t) {
        if (is_int(t)) return true;
        if (!is_var(t)) return false;
        if (t->tag == BaseType::Int) return true;
        for (const auto& m : M)
            if (m.is_prim() && m.prim == Prim::SEq && is_var(m.args[0]) && m.args[0]->id == t->id) return true;
        return false;
    };
    auto r_side = [&](const ExprP& t) {
        if (t->kind == ExprKind::Real) return true;
        if (!is_var(t)) return false;
        if (t->tag == BaseType::Real) return true;
        for (const auto& m : M)
            if (m.is_prim() && m.prim == Prim::SEq && is_var(m.args[1]) && m.args[1]->id == t->id) return true;
        return false;
    };
    if (fd_side(a) || fd_side(b)) return Specific::FD;
    if (r_side(a) || r_side(b)) return Specific::R;
    return Specific::Neither;
}

// ---------------------------------------------------------------- IE / ID

std::optional<MInference> ie_rule(const std::vector<Atom>& M) {
    for (std::size_t i = 0; i < M.size(); ++i) {
        if (!M[i].is_bridge()) continue;
        for (std::size_t j = i + 1; j < M.size(); ++j) {
            if (!M[j].is_bridge()) continue;
            const ExprP &x = M[i].args[0], &rx = M[i].args[1];
            const ExprP &x2 = M[j].args[0], &rx2 = M[j].args[1];
            if (is_var(rx) && is_var(rx2) && rx->id == rx2->id && is_var(x) && is_var(x2)) {
                MInference r{"IE", j, Atom::eq(x, x2), std::nullopt};
                return r;
            }
            if (is_var(x) && is_var(x2) && x->id == x2->id && is_var(rx) && is_var(rx2)) {
                MInference r{"IE", j, std::nullopt, Atom::eq(rx, rx2)};
                return r;
            }
        }
    }
    return std::nullopt;
}

std::optional<MInference> id_rule(const std::vector<Atom>& M, const Rat& epsilon) {
    for (std::size_t i = 0; i < M.size(); ++i) {
        const Atom& a = M[i];
        if (!a.is_antibridge()) continue;
        const ExprP &t = a.args[0], &s = a.args[1];
        if (is_var(t) && is_numeric(s)) {
            auto u = m_integer_mate(*numeric_value(s), epsilon);
            if (!u) continue;  // M8 discards it
            return MInference{"ID", i, Atom::neq(t, to_int(*u)), std::nullopt};
        }
        if (is_int(t) && is_var(s)) return MInference{"ID", i, std::nullopt, Atom::neq(s, mk_real(Rat(t->ival)))};
    }
    return std::nullopt;
}

}  // namespace cclnc
