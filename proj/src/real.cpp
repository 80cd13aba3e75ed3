#include "cclnc/real.hpp"

namespace cclnc {

namespace {

void addto(std::map<int, Rat>& m, int k, const Rat& a) {
    if (a == 0) return;
    auto it = m.find(k);
    if (it == m.end()) {
        m.emplace(k, a);
        return;
    }
    it->second += a;
    if (it->second == 0) m.erase(it);
}


LinearForm term(const ExprP& e) {
    LinearForm f;
    if (is_var(e))
        f.add(e->id, 1);
    else
        f.constant = *numeric_value(e);
    return f;
}

enum class Rel { Le, Lt, Eq };
enum class Shape { Ground, Linear, Diseq, Reified, Nonlinear };

struct Lin {
    LinearForm f;  // f rel 0
    Rel rel = Rel::Eq;
};

// classification of a non-trivial R atom
Shape classify(const Atom& a, Lin& out) {
    bool ground = is_ground(a.result);
    for (const auto& x : a.args) ground = ground && is_ground(x);
    if (ground) return Shape::Ground;
    const ExprP& t1 = a.args[0];
    const ExprP& t2 = a.args[1];
    switch (a.prim) {
        case Prim::RAdd:
            out.f = term(t1);
            out.f.add(term(t2));
            out.f.add(term(a.result), -1);
            return Shape::Linear;
        case Prim::RSub:
            out.f = term(t1);
            out.f.add(term(t2), -1);
            out.f.add(term(a.result), -1);
            return Shape::Linear;
        case Prim::RMul:
            if (is_numeric(t1)) {
                out.f.add(term(t2), *numeric_value(t1));
            } else if (is_numeric(t2)) {
                out.f.add(term(t1), *numeric_value(t2));
            } else {
                return Shape::Nonlinear;
            }
            out.f.add(term(a.result), -1);
            return Shape::Linear;
        case Prim::RDiv: {
            if (!is_numeric(t2)) return Shape::Nonlinear;
            Rat c = *numeric_value(t2);
            if (c == 0) return Shape::Ground;  // never satisfiable; r_eval-like failure below
            out.f.add(term(t1), 1 / c);
            out.f.add(term(a.result), -1);
            return Shape::Linear;
        }
        case Prim::RLe:
            if (is_var(a.result)) {
                out.f = term(t1);
                out.f.add(term(t2), -1);
                return Shape::Reified;
            }
            if (a.result->bval) {
                out.f = term(t1);
                out.f.add(term(t2), -1);
                out.rel = Rel::Le;
            } else {
                out.f = term(t2);
                out.f.add(term(t1), -1);
                out.rel = Rel::Lt;
            }
            return Shape::Linear;
        case Prim::Eq:
            out.f = term(t1);
            out.f.add(term(t2), -1);
            if (is_var(a.result)) return Shape::Reified;
            if (!a.result->bval) return Shape::Diseq;
            out.rel = Rel::Eq;
            return Shape::Linear;
        default:
            return Shape::Nonlinear;
    }
}

// a simplex over the linear part of an atom list
struct Sys {
    Simplex S;
    std::map<VarId, int> idx;
    std::map<std::map<int, Rat>, int> slack;
    bool ok = true;

    int var(VarId v) {
        auto it = idx.find(v);
        if (it != idx.end()) return it->second;
        int k = S.add_var();
        idx.emplace(v, k);
        return k;
    }
    std::map<int, Rat> lin(const LinearForm& f) {
        std::map<int, Rat> m;
        for (const auto& [v, a] : f.coeffs) m[var(v)] = a;
        return m;
    }
    void add(const Lin& l) {
        if (!ok) return;
        LinearForm f = reduce(l.f);
        if (f.is_constant()) {
            const Rat& c = f.constant;
            ok = l.rel == Rel::Eq ? c == 0 : (l.rel == Rel::Le ? c <= 0 : c < 0);
            return;
        }
        auto m = lin(f);
        Rat lead = m.begin()->second;
        int target;
        if (m.size() == 1) {
            target = m.begin()->first;
        } else {
            std::map<int, Rat> norm;
            for (auto& [k, a] : m) norm[k] = a / lead;
            auto it = slack.find(norm);
            target = it != slack.end() ? it->second : (slack[norm] = S.add_row(norm));
        }
        // lead·target + c rel 0  ⇒  target rel' -c/lead
        Rat rhs = -f.constant / lead;
        bool flip = lead < 0;
        switch (l.rel) {
            case Rel::Eq:
                ok = S.set_lower(target, DRat(rhs)) && S.set_upper(target, DRat(rhs));
                break;
            case Rel::Le:
                ok = flip ? S.set_lower(target, DRat(rhs)) : S.set_upper(target, DRat(rhs));
                break;
            case Rel::Lt:
                ok = flip ? S.set_lower(target, DRat(rhs, 1)) : S.set_upper(target, DRat(rhs, -1));
                break;
        }
    }
    // equalities solved for one variable each, in terms of the remaining ones
    std::map<VarId, LinearForm> elim;

    LinearForm reduce(const LinearForm& f) const {
        LinearForm g;
        g.constant = f.constant;
        for (const auto& [v, a] : f.coeffs) {
            auto it = elim.find(v);
            if (it == elim.end())
                g.add(v, a);
            else
                g.add(it->second, a);
        }
        return g;
    }
    // f == 0, before any inequality is added
    void add_eq(const LinearForm& f0) {
        if (!ok) return;
        LinearForm f = reduce(f0);
        if (f.is_constant()) {
            ok = f.constant == 0;
            return;
        }
        auto [v, a] = *f.coeffs.rbegin();
        LinearForm def;
        def.add(f, -1 / a);
        def.add(v, 1);
        for (auto& [w, g] : elim) {
            auto it = g.coeffs.find(v);
            if (it == g.coeffs.end()) continue;
            Rat c = it->second;
            g.coeffs.erase(it);
            g.add(def, c);
        }
        elim.emplace(v, std::move(def));
    }
    bool has(VarId v) const { return idx.count(v) || elim.count(v); }
    DRat value(VarId v) {
        LinearForm f;
        f.add(v, 1);
        f = reduce(f);
        DRat out(f.constant);
        for (const auto& [w, a] : f.coeffs) out = out + S.value(var(w)) * a;
        return out;
    }
    // sup and inf of f (nullopt = unbounded)
    std::optional<DRat> sup(const LinearForm& f0) {
        LinearForm f = reduce(f0);
        if (f.is_constant()) return DRat(f.constant);
        auto r = S.maximize(lin(f));
        if (!r) return r;
        return *r + DRat(f.constant);
    }
    std::optional<DRat> inf(const LinearForm& f) {
        LinearForm g;
        g.add(f, -1);
        auto r = sup(g);
        if (!r) return r;
        return DRat(-r->c, -r->k);
    }
};

bool build(const std::vector<Atom>& atoms, Sys& sys) {
    std::vector<Lin> ineqs;
    for (const auto& a : atoms) {
        if (!a.is_prim()) continue;
        Lin l;
        if (classify(a, l) != Shape::Linear) continue;
        if (l.rel == Rel::Eq)
            sys.add_eq(l.f);
        else
            ineqs.push_back(std::move(l));
    }
    for (const auto& l : ineqs) sys.add(l);
    return sys.ok && sys.S.check();
}

}  // namespace

// ---------------------------------------------------------------- linear forms

void LinearForm::add(VarId v, const Rat& a) {
    if (a == 0) return;
    auto it = coeffs.find(v);
    if (it == coeffs.end()) {
        coeffs.emplace(v, a);
        return;
    }
    it->second += a;
    if (it->second == 0) coeffs.erase(it);
}

void LinearForm::add(const LinearForm& o, const Rat& k) {
    for (const auto& [v, a] : o.coeffs) add(v, a * k);
    constant += o.constant * k;
}

// ---------------------------------------------------------------- simplex

int Simplex::add_var() {
    lo_.emplace_back();
    hi_.emplace_back();
    val_.emplace_back();
    row_of_.push_back(-1);
    return static_cast<int>(lo_.size()) - 1;
}

int Simplex::add_row(const std::map<int, Rat>& lin) {
    std::map<int, Rat> row;
    DRat v;
    for (const auto& [x, a] : lin) {
        int r = row_of_[static_cast<std::size_t>(x)];
        if (r >= 0) {
            for (const auto& [y, b] : rows_[static_cast<std::size_t>(r)]) addto(row, y, a * b);
        } else {
            addto(row, x, a);
        }
        v = v + val_[static_cast<std::size_t>(x)] * a;
    }
    int s = add_var();
    val_[static_cast<std::size_t>(s)] = v;
    rows_.push_back(std::move(row));
    basic_.push_back(s);
    row_of_[static_cast<std::size_t>(s)] = static_cast<int>(rows_.size()) - 1;
    return s;
}

bool Simplex::set_lower(int v, const DRat& b) {
    auto i = static_cast<std::size_t>(v);
    if (lo_[i] && b <= *lo_[i]) return true;
    lo_[i] = b;
    if (hi_[i] && *hi_[i] < b) return false;
    if (row_of_[i] < 0 && val_[i] < b) update(v, b);
    return true;
}

bool Simplex::set_upper(int v, const DRat& b) {
    auto i = static_cast<std::size_t>(v);
    if (hi_[i] && *hi_[i] <= b) return true;
    hi_[i] = b;
    if (lo_[i] && b < *lo_[i]) return false;
    if (row_of_[i] < 0 && b < val_[i]) update(v, b);
    return true;
}

bool Simplex::violates(int v) const {
    auto i = static_cast<std::size_t>(v);
    return (lo_[i] && val_[i] < *lo_[i]) || (hi_[i] && *hi_[i] < val_[i]);
}

void Simplex::update(int j, const DRat& v) {
    DRat theta = v - val_[static_cast<std::size_t>(j)];
    for (std::size_t r = 0; r < rows_.size(); ++r) {
        auto it = rows_[r].find(j);
        if (it != rows_[r].end()) {
            auto k = static_cast<std::size_t>(basic_[r]);
            val_[k] = val_[k] + theta * it->second;
        }
    }
    val_[static_cast<std::size_t>(j)] = v;
}

void Simplex::pivot_and_update(int b, int j, const DRat& v) {
    auto rb = static_cast<std::size_t>(row_of_[static_cast<std::size_t>(b)]);
    Rat a = rows_[rb].at(j);
    DRat theta = (v - val_[static_cast<std::size_t>(b)]) / a;
    val_[static_cast<std::size_t>(b)] = v;
    val_[static_cast<std::size_t>(j)] = val_[static_cast<std::size_t>(j)] + theta;
    for (std::size_t r = 0; r < rows_.size(); ++r) {
        if (r == rb) continue;
        auto it = rows_[r].find(j);
        if (it != rows_[r].end()) {
            auto k = static_cast<std::size_t>(basic_[r]);
            val_[k] = val_[k] + theta * it->second;
        }
    }
    pivot(b, j);
}

void Simplex::pivot(int b, int j) {
    auto rb = static_cast<std::size_t>(row_of_[static_cast<std::size_t>(b)]);
    std::map<int, Rat> old = std::move(rows_[rb]);
    Rat a = old.at(j);
    std::map<int, Rat> nr;
    nr.emplace(b, 1 / a);
    for (const auto& [k, c] : old)
        if (k != j) nr.emplace(k, -c / a);
    for (std::size_t r = 0; r < rows_.size(); ++r) {
        if (r == rb) continue;
        auto it = rows_[r].find(j);
        if (it == rows_[r].end()) continue;
        Rat c = it->second;
        rows_[r].erase(it);
        for (const auto& [k, d] : nr) addto(rows_[r], k, c * d);
    }
    rows_[rb] = std::move(nr);
    basic_[rb] = j;
    row_of_[static_cast<std::size_t>(j)] = static_cast<int>(rb);
    row_of_[static_cast<std::size_t>(b)] = -1;
}

bool Simplex::check() {
    while (true) {
        int b = -1;
        for (int v = 0; v < num_vars(); ++v)
            if (row_of_[static_cast<std::size_t>(v)] >= 0 && violates(v)) {
                b = v;
                break;
            }
        if (b < 0) return true;
        auto bi = static_cast<std::size_t>(b);
        const auto& row = rows_[static_cast<std::size_t>(row_of_[bi])];
        bool increase = lo_[bi] && val_[bi] < *lo_[bi];
        int j = -1;
        for (const auto& [x, a] : row) {
            auto xi = static_cast<std::size_t>(x);
            bool can_up = !hi_[xi] || val_[xi] < *hi_[xi];
            bool can_down = !lo_[xi] || *lo_[xi] < val_[xi];
            if (increase ? ((a > 0 && can_up) || (a < 0 && can_down)) : ((a < 0 && can_up) || (a > 0 && can_down))) {
                j = x;
                break;
            }
        }
        if (j < 0) return false;
        pivot_and_update(b, j, increase ? *lo_[bi] : *hi_[bi]);
    }
}

std::optional<DRat> Simplex::maximize(const std::map<int, Rat>& obj) {
    while (true) {
        std::map<int, Rat> c;
        for (const auto& [x, a] : obj) {
            int r = row_of_[static_cast<std::size_t>(x)];
            if (r >= 0) {
                for (const auto& [y, b] : rows_[static_cast<std::size_t>(r)]) addto(c, y, a * b);
            } else {
                addto(c, x, a);
            }
        }
        int j = -1, dir = 0;
        for (const auto& [x, a] : c) {
            auto xi = static_cast<std::size_t>(x);
            if (a > 0 && (!hi_[xi] || val_[xi] < *hi_[xi])) {
                j = x;
                dir = 1;
                break;
            }
            if (a < 0 && (!lo_[xi] || *lo_[xi] < val_[xi])) {
                j = x;
                dir = -1;
                break;
            }
        }
        if (j < 0) {
            DRat s;
            for (const auto& [x, a] : obj) s = s + val_[static_cast<std::size_t>(x)] * a;
            return s;
        }
        auto ji = static_cast<std::size_t>(j);
        std::optional<DRat> best;
        int leave = -1;
        DRat target;
        if (dir > 0 && hi_[ji]) {
            best = *hi_[ji] - val_[ji];
            leave = j;
        }
        if (dir < 0 && lo_[ji]) {
            best = val_[ji] - *lo_[ji];
            leave = j;
        }
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            auto it = rows_[r].find(j);
            if (it == rows_[r].end()) continue;
            int k = basic_[r];
            auto ki = static_cast<std::size_t>(k);
            Rat rate = it->second * dir;
            std::optional<DRat> t;
            DRat bound;
            if (rate > 0 && hi_[ki]) {
                t = (*hi_[ki] - val_[ki]) / rate;
                bound = *hi_[ki];
            } else if (rate < 0 && lo_[ki]) {
                t = (val_[ki] - *lo_[ki]) / (-rate);
                bound = *lo_[ki];
            }
            if (!t) continue;
            if (!best || *t < *best || (*t == *best && k < leave)) {
                best = t;
                leave = k;
                target = bound;
            }
        }
        if (!best) return std::nullopt;
        if (leave == j)
            update(j, val_[ji] + *best * Rat(dir));
        else
            pivot_and_update(leave, j, target);
    }
}

// ---------------------------------------------------------------- R atoms

bool is_r_atom(const Atom& a) {
    if (!a.is_prim()) return true;
    bool res_bool = is_var(a.result) || a.result->kind == ExprKind::Bool;
    auto side = [](const ExprP& e) { return (is_var(e) && e->tag != BaseType::Int) || is_numeric(e); };
    switch (a.prim) {
        case Prim::RAdd: case Prim::RSub: case Prim::RMul: case Prim::RDiv:
            return side(a.args[0]) && side(a.args[1]) && side(a.result);
        case Prim::RLe:
            return side(a.args[0]) && side(a.args[1]) && res_bool;
        case Prim::Eq:
            return side(a.args[0]) && side(a.args[1]) && res_bool &&
                   (a.args[0]->kind != ExprKind::Int || a.args[1]->kind != ExprKind::Int);
        default:
            return false;
    }
}

std::optional<bool> r_eval(const Atom& a) {
    if (a.kind == Atom::Kind::True) return true;
    if (a.kind == Atom::Kind::False) return false;
    for (const auto& x : a.args)
        if (!is_numeric(x)) return std::nullopt;
    if (a.prim == Prim::Eq || a.prim == Prim::RLe) {
        if (a.result->kind != ExprKind::Bool) return std::nullopt;
        Rat x = *numeric_value(a.args[0]), y = *numeric_value(a.args[1]);
        bool v = a.prim == Prim::Eq ? x == y : x <= y;
        return v == a.result->bval;
    }
    if (!is_numeric(a.result)) return std::nullopt;
    Rat x = *numeric_value(a.args[0]), y = *numeric_value(a.args[1]), z = *numeric_value(a.result);
    switch (a.prim) {
        case Prim::RAdd: return x + y == z;
        case Prim::RSub: return x - y == z;
        case Prim::RMul: return x * y == z;
        case Prim::RDiv: return y != 0 && x / y == z;
        default: return std::nullopt;
    }
}

// ---------------------------------------------------------------- store

void RStore::substitute(const Subst& s) {
    Store st;
    for (const auto& a : atoms_) st.add(apply_subst(a, s));
    atoms_ = std::move(st.atoms);
    sigma_ = compose(sigma_, s);
}

bool RStore::post(const Atom& a0) {
    if (failed_) return false;
    Atom a = sigma_.empty() ? a0 : apply_subst(a0, sigma_);
    if (a.kind == Atom::Kind::False) return !(failed_ = true);
    if (a.kind == Atom::Kind::True) return true;
    if (!is_r_atom(a)) throw std::runtime_error("not an R constraint: " + show(a));
    Store st;
    st.atoms = std::move(atoms_);
    st.add(a);
    atoms_ = std::move(st.atoms);
    Sys sys;
    if (!build(atoms_, sys)) return !(failed_ = true);
    return true;
}

bool RStore::post_all(const std::vector<Atom>& as) {
    if (failed_) return false;
    Store st;
    st.atoms = std::move(atoms_);
    for (const auto& a0 : as) {
        Atom a = sigma_.empty() ? a0 : apply_subst(a0, sigma_);
        if (a.kind == Atom::Kind::False) return !(failed_ = true);
        if (a.kind == Atom::Kind::True) continue;
        if (!is_r_atom(a)) throw std::runtime_error("not an R constraint: " + show(a));
        st.add(a);
    }
    atoms_ = std::move(st.atoms);
    Sys sys;
    if (!build(atoms_, sys)) return !(failed_ = true);
    return true;
}

bool RStore::wake_delayed(const Subst& s) {
    if (failed_) return false;
    if (!s.empty()) substitute(s);
    return solve();
}

bool RStore::solve() {
    if (failed_) return false;
    while (true) {
        // variable-variable equalities bind right to left
        bool bound = false;
        for (const auto& a : atoms_) {
            if (a.is_eq() && is_var(a.args[0]) && is_var(a.args[1]) && a.args[0]->id != a.args[1]->id) {
                Subst s;
                s.bind(a.args[1], a.args[0]);
                substitute(s);
                bound = true;
                break;
            }
        }
        if (bound) continue;

        std::vector<Atom> keep;
        for (const auto& a : atoms_) {
            if (!a.is_prim()) {
                if (a.kind == Atom::Kind::False) return !(failed_ = true);
                continue;
            }
            Lin l;
            if (classify(a, l) == Shape::Ground) {
                auto v = r_eval(a);
                if (!v) {
                    if (a.prim == Prim::RDiv) return !(failed_ = true);  // t / 0
                    keep.push_back(a);
                    continue;
                }
                if (!*v) return !(failed_ = true);
                continue;
            }
            if (a.is_eq() && is_var(a.args[0]) && is_var(a.args[1])) continue;  // X == X
            keep.push_back(a);
        }
        atoms_ = std::move(keep);

        Sys sys;
        if (!build(atoms_, sys)) return !(failed_ = true);

        Subst s;
        std::vector<Atom> keep2;
        for (const auto& a : atoms_) {
            Lin l;
            Shape sh = classify(a, l);
            if (sh == Shape::Diseq) {
                auto hi = sys.sup(l.f), lo = sys.inf(l.f);
                bool zero_hi = hi && *hi == DRat(0), zero_lo = lo && *lo == DRat(0);
                if (zero_hi && zero_lo) return !(failed_ = true);
                if ((hi && *hi < DRat(0)) || (lo && DRat(0) < *lo)) continue;  // entailed
            } else if (sh == Shape::Reified && !s.binds(a.result->id)) {
                auto hi = sys.sup(l.f), lo = sys.inf(l.f);
                std::optional<bool> v;
                if (a.prim == Prim::RLe) {
                    if (hi && *hi <= DRat(0)) v = true;
                    else if (lo && DRat(0) < *lo) v = false;
                } else {
                    if (hi && lo && *hi == DRat(0) && *lo == DRat(0)) v = true;
                    else if ((hi && *hi < DRat(0)) || (lo && DRat(0) < *lo)) v = false;
                }
                if (v) s.bind(a.result, mk_bool(*v));
            }
            keep2.push_back(a);
        }
        atoms_ = std::move(keep2);

        // implied equalities: every optimum is a feasible point, and a variable
        // taking two different values at feasible points is not fixed
        std::map<VarId, ExprP> vars;
        for (const auto& a : atoms_) collect_vars(a, vars);
        std::map<VarId, DRat> cand;
        if (sys.S.check())
            for (const auto& [id, var] : vars)
                if (!s.binds(id) && sys.has(id)) cand.emplace(id, sys.value(id));
        auto prune = [&] {
            for (auto it = cand.begin(); it != cand.end();)
                it = sys.value(it->first) == it->second ? std::next(it) : cand.erase(it);
        };
        for (const auto& [id, var] : vars) {
            if (!cand.count(id)) continue;
            LinearForm f;
            f.add(id, 1);
            auto hi = sys.sup(f);
            prune();
            if (!hi || hi->k != 0 || !cand.count(id)) continue;
            auto lo = sys.inf(f);
            prune();
            if (lo && *lo == *hi) s.bind(var, mk_real(hi->c));
        }
        if (s.empty()) return true;
        substitute(s);
    }
}

std::vector<Atom> RStore::delayed() const {
    std::vector<Atom> out;
    for (const auto& a : atoms_) {
        Lin l;
        if (a.is_prim() && classify(a, l) == Shape::Nonlinear) out.push_back(a);
    }
    return out;
}

bool RStore::entails(const Atom& a0) const {
    Atom a = apply_subst(a0, sigma_);
    Lin l;
    Shape sh = classify(a, l);
    if (sh == Shape::Ground) return r_eval(a).value_or(false);
    Sys sys;
    if (!build(atoms_, sys)) return true;  // inconsistent store entails everything
    if (sh == Shape::Linear) {
        auto hi = sys.sup(l.f);
        if (l.rel == Rel::Le) return hi && *hi <= DRat(0);
        if (l.rel == Rel::Lt) return hi && *hi < DRat(0);
        auto lo = sys.inf(l.f);
        return hi && lo && *hi == DRat(0) && *lo == DRat(0);
    }
    if (sh == Shape::Diseq) {
        auto hi = sys.sup(l.f), lo = sys.inf(l.f);
        return (hi && *hi < DRat(0)) || (lo && DRat(0) < *lo);
    }
    return false;
}

std::pair<std::optional<DRat>, std::optional<DRat>> RStore::bounds(const ExprP& v0) const {
    ExprP v = sigma_.apply(v0);
    if (is_numeric(v)) return {DRat(*numeric_value(v)), DRat(*numeric_value(v))};
    Sys sys;
    if (!build(atoms_, sys)) return {std::nullopt, std::nullopt};
    LinearForm f;
    f.add(v->id, 1);
    return {sys.inf(f), sys.sup(f)};
}

RResult solve_r(const std::vector<Atom>& pi) {
    RStore s;
    RResult r;
    for (const auto& a : pi)
        if (!s.post(a)) {
            r.fail = true;
            return r;
        }
    if (!s.solve()) {
        r.fail = true;
        return r;
    }
    r.atoms = s.residual();
    r.sigma = s.sigma();
    return r;
}

}  // namespace cclnc
