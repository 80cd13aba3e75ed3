#include "cclnc/fd.hpp"

#include <algorithm>
#include <sstream>

namespace cclnc {

namespace {

using i64 = std::int64_t;
using i128 = __int128;

i64 clamp(i128 v) {
    if (v >= FD_INF) return FD_INF;
    if (v <= -FD_INF) return -FD_INF;
    return static_cast<i64>(v);
}
bool inf(i64 v) { return v >= FD_INF || v <= -FD_INF; }

i64 add_lo(i64 a, i64 b) { return (a <= -FD_INF || b <= -FD_INF) ? -FD_INF : clamp(i128(a) + b); }
i64 add_hi(i64 a, i64 b) { return (a >= FD_INF || b >= FD_INF) ? FD_INF : clamp(i128(a) + b); }
i64 neg(i64 a) { return -a; }  // symmetric range keeps infinities infinite

i64 mul(i64 a, i64 b) {
    if (a == 0 || b == 0) return 0;
    if (inf(a) || inf(b)) return ((a > 0) == (b > 0)) ? FD_INF : -FD_INF;
    return clamp(i128(a) * b);
}

i64 floor_div(i64 a, i64 b) {
    i64 q = a / b, r = a % b;
    if (r != 0 && ((r < 0) != (b < 0))) --q;
    return q;
}
i64 ceil_div(i64 a, i64 b) {
    i64 q = a / b, r = a % b;
    if (r != 0 && ((r < 0) == (b < 0))) ++q;
    return q;
}
i64 tdiv(i64 a, i64 b) {
    if (inf(b)) return inf(a) ? ((a > 0) == (b > 0) ? 1 : -1) : 0;
    if (inf(a)) return ((a > 0) == (b > 0)) ? FD_INF : -FD_INF;
    return a / b;
}

bool is_int(const ExprP& e) { return e->kind == ExprKind::Int; }
bool int_pat(const ExprP& e) { return is_var(e) || is_int(e); }

// elements of a proper list pattern; false if the spine is open or malformed
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

std::optional<LabelStrategy> strategy_of(const ExprP& opts) {
    std::vector<ExprP> xs;
    if (!list_elems(opts, xs)) return std::nullopt;
    LabelStrategy s = LabelStrategy::Naive;
    for (const auto& x : xs) {
        if (x->kind != ExprKind::Sym) return std::nullopt;
        if (*x->name == "ff") s = LabelStrategy::FirstFail;
    }
    return s;
}

}  // namespace

// ---------------------------------------------------------------- domains

std::int64_t FDDomain::size() const {
    if (!bounded()) return FD_INF;
    if (empty()) return 0;
    return hi - lo + 1 - static_cast<i64>(holes.size());
}

bool FDDomain::contains(std::int64_t v) const {
    if (v < lo || v > hi) return false;
    return !std::binary_search(holes.begin(), holes.end(), v);
}

void FDDomain::normalize() {
    if (empty()) {
        holes.clear();
        return;
    }
    auto it = holes.begin();
    while (it != holes.end() && *it <= lo) {
        if (*it == lo) ++lo;
        ++it;
    }
    holes.erase(holes.begin(), it);
    while (!holes.empty() && holes.back() >= hi) {
        if (holes.back() == hi) --hi;
        holes.pop_back();
    }
    if (empty()) holes.clear();
}

bool FDDomain::set_lo(std::int64_t v) {
    if (v <= lo) return false;
    lo = v;
    normalize();
    return true;
}

bool FDDomain::set_hi(std::int64_t v) {
    if (v >= hi) return false;
    hi = v;
    normalize();
    return true;
}

bool FDDomain::remove(std::int64_t v) {
    if (!contains(v)) return false;
    if (v == lo) {
        if (lo == hi) {
            lo = 1;
            hi = 0;
            holes.clear();
            return true;
        }
        ++lo;
    } else if (v == hi) {
        --hi;
    } else {
        holes.insert(std::upper_bound(holes.begin(), holes.end(), v), v);
        return true;
    }
    normalize();
    return true;
}

bool FDDomain::intersect(const FDDomain& o) {
    FDDomain before = *this;
    set_lo(o.lo);
    set_hi(o.hi);
    for (auto h : o.holes) remove(h);
    return !(before == *this);
}

bool FDDomain::keep_only(const std::vector<std::int64_t>& vals) {
    std::vector<i64> keep;
    for (auto v : vals)
        if (contains(v)) keep.push_back(v);
    std::sort(keep.begin(), keep.end());
    keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
    FDDomain n;
    if (keep.empty()) {
        n.lo = 1;
        n.hi = 0;
    } else {
        n.lo = keep.front();
        n.hi = keep.back();
        for (std::size_t i = 0; i + 1 < keep.size(); ++i)
            for (i64 h = keep[i] + 1; h < keep[i + 1]; ++h) n.holes.push_back(h);
    }
    bool changed = !(n == *this);
    *this = std::move(n);
    return changed;
}

std::vector<std::int64_t> FDDomain::values() const {
    std::vector<i64> out;
    if (!bounded() || empty()) return out;
    auto h = holes.begin();
    for (i64 v = lo; v <= hi; ++v) {
        if (h != holes.end() && *h == v) {
            ++h;
            continue;
        }
        out.push_back(v);
    }
    return out;
}

std::string show(const FDDomain& d) {
    if (d.empty()) return "{}";
    std::ostringstream os;
    os << (d.lo_bounded() ? std::to_string(d.lo) : "-inf") << ".." << (d.hi_bounded() ? std::to_string(d.hi) : "inf");
    for (auto h : d.holes) os << " \\" << h;
    return os.str();
}

// ---------------------------------------------------------------- classification

bool is_fd_atom(const Atom& a) {
    if (!a.is_prim()) return true;
    bool res_ok = is_var(a.result) || a.result->kind == ExprKind::Bool;
    switch (a.prim) {
        case Prim::Eq:
            return int_pat(a.args[0]) && int_pat(a.args[1]) && res_ok &&
                   (is_int(a.args[0]) || is_int(a.args[1]) || a.args[0]->tag != BaseType::Real);
        case Prim::FAdd: case Prim::FSub: case Prim::FMul: case Prim::FDiv:
            return int_pat(a.args[0]) && int_pat(a.args[1]) && int_pat(a.result);
        case Prim::FLe:
            return int_pat(a.args[0]) && int_pat(a.args[1]) && res_ok;
        case Prim::Domain:
            return is_pattern(a.args[0]) && int_pat(a.args[1]) && int_pat(a.args[2]) && res_ok;
        case Prim::Belongs:
            return int_pat(a.args[0]) && is_pattern(a.args[1]) && res_ok;
        case Prim::Labeling:
            return is_pattern(a.args[0]) && is_pattern(a.args[1]) && res_ok;
        default:
            return false;
    }
}

std::optional<bool> fd_eval(const Atom& a) {
    if (a.kind == Atom::Kind::True) return true;
    if (a.kind == Atom::Kind::False) return false;
    for (const auto& x : a.args)
        if (!is_ground(x)) return std::nullopt;
    if (!is_ground(a.result)) return std::nullopt;
    auto iv = [](const ExprP& e) { return e->ival; };
    bool expect = a.result->kind == ExprKind::Bool ? a.result->bval : true;
    switch (a.prim) {
        case Prim::Eq: return (iv(a.args[0]) == iv(a.args[1])) == expect;
        case Prim::FLe: return (iv(a.args[0]) <= iv(a.args[1])) == expect;
        case Prim::FAdd: return clamp(i128(iv(a.args[0])) + iv(a.args[1])) == iv(a.result);
        case Prim::FSub: return clamp(i128(iv(a.args[0])) - iv(a.args[1])) == iv(a.result);
        case Prim::FMul: return mul(iv(a.args[0]), iv(a.args[1])) == iv(a.result);
        case Prim::FDiv: return iv(a.args[1]) != 0 && iv(a.args[0]) / iv(a.args[1]) == iv(a.result);
        case Prim::Domain: {
            std::vector<ExprP> xs;
            if (!list_elems(a.args[0], xs)) return std::nullopt;
            i64 l = iv(a.args[1]), h = iv(a.args[2]);
            bool ok = l <= h;
            for (const auto& x : xs) ok = ok && l <= iv(x) && iv(x) <= h;
            return ok == expect;
        }
        case Prim::Belongs: {
            std::vector<ExprP> xs;
            if (!list_elems(a.args[1], xs)) return std::nullopt;
            bool in = false;
            for (const auto& x : xs) in = in || iv(x) == iv(a.args[0]);
            return in == expect;
        }
        case Prim::Labeling: return expect;
        default: return std::nullopt;
    }
}

// ---------------------------------------------------------------- store

FDDomain& FDStore::dom(const ExprP& v) {
    auto it = dom_.find(v->id);
    if (it == dom_.end()) {
        var_[v->id] = v;
        order_.push_back(v->id);
        it = dom_.emplace(v->id, FDDomain{}).first;
    }
    return it->second;
}

std::int64_t FDStore::lo(const ExprP& e) { return is_int(e) ? e->ival : dom(e).lo; }
std::int64_t FDStore::hi(const ExprP& e) { return is_int(e) ? e->ival : dom(e).hi; }

bool FDStore::fixed(const ExprP& e, std::int64_t& v) {
    if (is_int(e)) {
        v = e->ival;
        return true;
    }
    const FDDomain& d = dom(e);
    if (d.singleton()) {
        v = d.lo;
        return true;
    }
    return false;
}

std::optional<FDDomain> FDStore::domain(VarId v) const {
    auto it = dom_.find(v);
    if (it == dom_.end()) return std::nullopt;
    return it->second;
}

std::optional<FDDomain> FDStore::domain(const ExprP& v) const {
    ExprP e = sigma_.apply(v);
    if (is_int(e)) {
        FDDomain d;
        d.lo = d.hi = e->ival;
        return d;
    }
    if (!is_var(e)) return std::nullopt;
    auto d = domain(e->id);
    return d ? d : std::optional<FDDomain>(FDDomain{});
}

void FDStore::substitute(const Subst& s) {
    for (auto& a : cons_) a = apply_subst(a, s);
    sigma_ = compose(sigma_, s);
}

bool FDStore::bind_var(const ExprP& y, const ExprP& x) {
    FDDomain dy = dom(y);
    FDDomain& dx = dom(x);
    dx.intersect(dy);
    if (dx.empty()) return false;
    dom_.erase(y->id);
    Subst s;
    s.bind(y, x);
    substitute(s);
    return true;
}

bool FDStore::bind_int(const ExprP& y, std::int64_t v) {
    if (!dom(y).contains(v)) return false;
    dom_.erase(y->id);
    Subst s;
    s.bind(y, mk_int(v));
    substitute(s);
    return true;
}

bool FDStore::tighten(const ExprP& e, std::int64_t l, std::int64_t h, bool& changed) {
    if (is_int(e)) return l <= e->ival && e->ival <= h;
    FDDomain& d = dom(e);
    if (l > -FD_INF) changed |= d.set_lo(l);
    if (h < FD_INF) changed |= d.set_hi(h);
    return !d.empty();
}

bool FDStore::remove_value(const ExprP& e, std::int64_t v, bool& changed) {
    if (is_int(e)) return e->ival != v;
    FDDomain& d = dom(e);
    changed |= d.remove(v);
    return !d.empty();
}

bool FDStore::label_var(VarId v) const {
    for (const auto& a : cons_) {
        if (!a.is_prim() || a.prim != Prim::Labeling) continue;
        std::vector<ExprP> xs;
        if (!list_elems(a.args[1], xs)) continue;
        for (const auto& x : xs)
            if (is_var(x) && x->id == v) return true;
    }
    return false;
}

FDStore::PR FDStore::arith(Atom& a, bool& changed) {
    ExprP x = a.args[0], y = a.args[1], z = a.result;
    if (is_int(x) && is_int(y) && is_int(z)) return *fd_eval(a) ? PR::Drop : PR::Fail;
    auto T = [&](const ExprP& e, i64 l, i64 h) { return tighten(e, l, h, changed); };
    switch (a.prim) {
        case Prim::FAdd:
            if (!T(z, add_lo(lo(x), lo(y)), add_hi(hi(x), hi(y)))) return PR::Fail;
            if (!T(x, add_lo(lo(z), neg(hi(y))), add_hi(hi(z), neg(lo(y))))) return PR::Fail;
            if (!T(y, add_lo(lo(z), neg(hi(x))), add_hi(hi(z), neg(lo(x))))) return PR::Fail;
            break;
        case Prim::FSub:
            if (!T(z, add_lo(lo(x), neg(hi(y))), add_hi(hi(x), neg(lo(y))))) return PR::Fail;
            if (!T(x, add_lo(lo(z), lo(y)), add_hi(hi(z), hi(y)))) return PR::Fail;
            if (!T(y, add_lo(lo(x), neg(hi(z))), add_hi(hi(x), neg(lo(z))))) return PR::Fail;
            break;
        case Prim::FMul: {
            i64 c[4] = {mul(lo(x), lo(y)), mul(lo(x), hi(y)), mul(hi(x), lo(y)), mul(hi(x), hi(y))};
            if (!T(z, *std::min_element(c, c + 4), *std::max_element(c, c + 4))) return PR::Fail;
            // x from z / y when y excludes 0 (and symmetrically)
            auto back = [&](const ExprP& u, const ExprP& w) {
                if (lo(w) <= 0 && hi(w) >= 0) return true;
                if (inf(lo(z)) || inf(hi(z))) return true;
                i64 ws[2] = {lo(w), hi(w)}, zs[2] = {lo(z), hi(z)};
                i64 l = FD_INF, h = -FD_INF;
                for (i64 zc : zs)
                    for (i64 wc : ws) {
                        if (inf(wc)) {
                            l = std::min<i64>(l, zc >= 0 ? 0 : -1);
                            h = std::max<i64>(h, zc <= 0 ? 0 : 1);
                            continue;
                        }
                        l = std::min(l, ceil_div(zc, wc));
                        h = std::max(h, floor_div(zc, wc));
                    }
                return T(u, l, h);
            };
            if (!back(x, y) || !back(y, x)) return PR::Fail;
            if (lo(z) > 0 || hi(z) < 0) {
                if (!remove_value(x, 0, changed) || !remove_value(y, 0, changed)) return PR::Fail;
            }
            break;
        }
        case Prim::FDiv: {
            if (!remove_value(y, 0, changed)) return PR::Fail;
            if (!inf(lo(x)) && !inf(hi(x))) {
                i64 l = FD_INF, h = -FD_INF;
                auto corner = [&](i64 ya, i64 yb) {
                    for (i64 xc : {lo(x), hi(x)})
                        for (i64 yc : {ya, yb}) {
                            i64 q = tdiv(xc, yc);
                            l = std::min(l, q);
                            h = std::max(h, q);
                        }
                };
                if (hi(y) >= 1) corner(std::max<i64>(1, lo(y)), hi(y));
                if (lo(y) <= -1) corner(lo(y), std::min<i64>(-1, hi(y)));
                if (l <= h && !T(z, l, h)) return PR::Fail;
            }
            i64 v;
            if (fixed(y, v) && v != 0 && !inf(lo(z)) && !inf(hi(z))) {
                // trunc(x / v) in [zl, zh]
                i64 av = v > 0 ? v : -v;
                i64 zl = v > 0 ? lo(z) : -hi(z), zh = v > 0 ? hi(z) : -lo(z);  // bounds for trunc(x'/av), x' = sign*x
                i64 xl = zl > 0 ? clamp(i128(zl) * av) : clamp(i128(zl - 1) * av + 1);
                i64 xh = zh >= 0 ? clamp(i128(zh + 1) * av - 1) : clamp(i128(zh) * av);
                if (v > 0) {
                    if (!T(x, xl, xh)) return PR::Fail;
                } else if (!T(x, neg(xh), neg(xl))) {
                    return PR::Fail;
                }
            }
            break;
        }
        default:
            break;
    }
    return PR::Keep;
}

FDStore::PR FDStore::reify(Atom& a, bool& changed) {
    std::optional<bool> v;
    i64 p, q;
    switch (a.prim) {
        case Prim::Eq: {
            const ExprP &x = a.args[0], &y = a.args[1];
            if (is_var(x) && is_var(y) && x->id == y->id) {
                v = true;
            } else if (fixed(x, p) && fixed(y, q)) {
                v = p == q;
            } else if (hi(x) < lo(y) || hi(y) < lo(x)) {
                v = false;
            } else if (fixed(x, p) && is_var(y) && !dom(y).contains(p)) {
                v = false;
            } else if (fixed(y, q) && is_var(x) && !dom(x).contains(q)) {
                v = false;
            }
            break;
        }
        case Prim::FLe:
            if (hi(a.args[0]) <= lo(a.args[1])) v = true;
            else if (lo(a.args[0]) > hi(a.args[1])) v = false;
            break;
        case Prim::Domain: {
            std::vector<ExprP> xs;
            if (!list_elems(a.args[0], xs)) break;
            if (!fixed(a.args[1], p) || !fixed(a.args[2], q)) break;
            if (p > q) {
                v = false;
                break;
            }
            bool all_in = true;
            for (const auto& e : xs) {
                if (hi(e) < p || lo(e) > q) {
                    v = false;
                    break;
                }
                all_in = all_in && lo(e) >= p && hi(e) <= q;
            }
            if (!v && all_in) v = true;
            break;
        }
        case Prim::Belongs: {
            std::vector<ExprP> xs;
            if (!list_elems(a.args[1], xs)) break;
            std::vector<i64> vals;
            for (const auto& e : xs) {
                if (!is_int(e)) return PR::Keep;
                vals.push_back(e->ival);
            }
            const ExprP& x = a.args[0];
            if (fixed(x, p)) {
                v = std::find(vals.begin(), vals.end(), p) != vals.end();
            } else if (dom(x).bounded()) {
                bool any = false, all = true;
                for (i64 w : dom(x).values()) {
                    bool in = std::find(vals.begin(), vals.end(), w) != vals.end();
                    any = any || in;
                    all = all && in;
                }
                if (!any) v = false;
                else if (all) v = true;
            }
            break;
        }
        default:
            break;
    }
    if (!v) return PR::Keep;
    changed = true;
    Subst s;
    s.bind(a.result, mk_bool(*v));
    substitute(s);  // rewrites a (it lives in cons_) as well
    return PR::Keep;
}

FDStore::PR FDStore::run(Atom& a, bool& changed) {
    if (a.kind == Atom::Kind::True) return PR::Drop;
    if (a.kind == Atom::Kind::False) return PR::Fail;
    if (is_var(a.result) && a.prim != Prim::FAdd && a.prim != Prim::FSub && a.prim != Prim::FMul &&
        a.prim != Prim::FDiv)
        return reify(a, changed);
    switch (a.prim) {
        case Prim::Eq: {
            ExprP x = a.args[0], y = a.args[1];
            bool pos = a.result_is(true);
            if (is_int(x) && is_int(y)) return ((x->ival == y->ival) == pos) ? PR::Drop : PR::Fail;
            if (pos) {
                if (is_var(x) && is_var(y)) {
                    if (x->id == y->id) return PR::Drop;
                    changed = true;
                    return bind_var(y, x) ? PR::Drop : PR::Fail;
                }
                const ExprP& v = is_var(x) ? x : y;
                i64 c = is_var(x) ? y->ival : x->ival;
                if (!tighten(v, c, c, changed)) return PR::Fail;
                return PR::Drop;
            }
            if (is_var(x) && is_var(y) && x->id == y->id) return PR::Fail;
            i64 p, q;
            bool fx = fixed(x, p), fy = fixed(y, q);
            if (fx && fy) return p != q ? PR::Drop : PR::Fail;
            if (fx) return remove_value(y, p, changed) ? PR::Drop : PR::Fail;
            if (fy) return remove_value(x, q, changed) ? PR::Drop : PR::Fail;
            if (hi(x) < lo(y) || hi(y) < lo(x)) return PR::Drop;
            return PR::Keep;
        }
        case Prim::FLe: {
            const ExprP &x = a.args[0], &y = a.args[1];
            if (a.result_is(true)) {
                if (!tighten(x, -FD_INF, hi(y), changed) || !tighten(y, lo(x), FD_INF, changed)) return PR::Fail;
                return hi(x) <= lo(y) ? PR::Drop : PR::Keep;
            }
            // x > y
            i64 yh1 = inf(hi(x)) ? hi(x) : hi(x) - 1;
            i64 xl1 = inf(lo(y)) ? lo(y) : lo(y) + 1;
            if (!tighten(y, -FD_INF, yh1, changed) || !tighten(x, xl1, FD_INF, changed)) return PR::Fail;
            return lo(x) > hi(y) ? PR::Drop : PR::Keep;
        }
        case Prim::FAdd: case Prim::FSub: case Prim::FMul: case Prim::FDiv:
            return arith(a, changed);
        case Prim::Domain: {
            std::vector<ExprP> xs;
            if (!list_elems(a.args[0], xs)) return PR::Keep;
            if (a.result_is(false)) {
                auto r = fd_eval(a);
                if (!r) return PR::Keep;
                return *r ? PR::Drop : PR::Fail;
            }
            const ExprP &l = a.args[1], &h = a.args[2];
            if (!tighten(l, -FD_INF, hi(h), changed) || !tighten(h, lo(l), FD_INF, changed)) return PR::Fail;
            for (const auto& e : xs)
                if (!tighten(e, lo(l), hi(h), changed)) return PR::Fail;
            i64 p, q;
            return fixed(l, p) && fixed(h, q) ? PR::Drop : PR::Keep;
        }
        case Prim::Belongs: {
            std::vector<ExprP> xs;
            if (!list_elems(a.args[1], xs)) return PR::Keep;
            std::vector<i64> vals;
            for (const auto& e : xs) {
                if (!is_int(e)) return PR::Keep;
                vals.push_back(e->ival);
            }
            const ExprP& x = a.args[0];
            if (is_int(x)) {
                bool in = std::find(vals.begin(), vals.end(), x->ival) != vals.end();
                return in == a.result_is(true) ? PR::Drop : PR::Fail;
            }
            if (a.result_is(true)) {
                changed |= dom(x).keep_only(vals);
                return dom(x).empty() ? PR::Fail : PR::Drop;
            }
            for (i64 w : vals)
                if (!remove_value(x, w, changed)) return PR::Fail;
            return PR::Drop;
        }
        case Prim::Labeling: {
            std::vector<ExprP> xs;
            if (!list_elems(a.args[1], xs)) return PR::Keep;
            for (const auto& e : xs)
                if (!is_int(e)) return PR::Keep;
            return PR::Drop;
        }
        default:
            return PR::Keep;
    }
}

bool FDStore::post(const Atom& a0) {
    if (failed_) return false;
    Atom a = sigma_.empty() ? a0 : apply_subst(a0, sigma_);
    if (a.kind == Atom::Kind::False) return !(failed_ = true);
    if (a.kind == Atom::Kind::True) return true;
    if (!is_fd_atom(a)) throw FDError("not an FD constraint: " + show(a));
    // register integer variables in first-seen order
    auto reg = [&](const ExprP& e) {
        if (is_var(e)) dom(e);
    };
    switch (a.prim) {
        case Prim::Domain: {
            std::vector<ExprP> xs;
            list_elems(a.args[0], xs);
            for (auto& x : xs) reg(x);
            reg(a.args[1]);
            reg(a.args[2]);
            break;
        }
        case Prim::Belongs: reg(a.args[0]); break;
        case Prim::Labeling: {
            std::vector<ExprP> xs;
            list_elems(a.args[1], xs);
            for (auto& x : xs) reg(x);
            break;
        }
        case Prim::FAdd: case Prim::FSub: case Prim::FMul: case Prim::FDiv:
            reg(a.result);
            [[fallthrough]];
        default:
            reg(a.args[0]);
            reg(a.args[1]);
    }
    for (const auto& c : cons_)
        if (c == a) return true;
    cons_.push_back(a);
    bool changed = false;
    std::size_t i = cons_.size() - 1;
    PR r = run(cons_[i], changed);
    if (r == PR::Fail) return !(failed_ = true);
    if (r == PR::Drop) cons_.erase(cons_.begin() + static_cast<long>(i));
    return true;
}

bool FDStore::propagate() {
    if (failed_) return false;
    while (true) {
        bool changed = false;
        for (std::size_t i = 0; i < cons_.size();) {
            PR r = run(cons_[i], changed);
            if (r == PR::Fail) return !(failed_ = true);
            if (r == PR::Drop) {
                cons_.erase(cons_.begin() + static_cast<long>(i));
                changed = true;
            } else {
                ++i;
            }
        }
        for (const auto& [id, d] : dom_)
            if (d.empty()) return !(failed_ = true);
        if (changed) continue;
        // singleton domains bind, except variables awaiting labeling
        std::vector<std::pair<ExprP, i64>> singles;
        for (const auto& [id, d] : dom_)
            if (d.singleton() && !label_var(id)) singles.emplace_back(var_[id], d.lo);
        if (singles.empty()) return true;
        for (auto& [v, val] : singles)
            if (!bind_int(v, val)) return !(failed_ = true);
    }
}

std::vector<Atom> FDStore::residual() const {
    std::vector<Atom> out;
    for (VarId id : order_) {
        auto it = dom_.find(id);
        if (it == dom_.end()) continue;
        const FDDomain& d = it->second;
        const ExprP& x = var_.at(id);
        if (d.bounded()) {
            out.push_back(Atom::make(Prim::Domain, {mk_list({x}), mk_int(d.lo), mk_int(d.hi)}, mk_bool(true)));
        } else {
            if (d.lo_bounded()) out.push_back(Atom::make(Prim::FLe, {mk_int(d.lo), x}, mk_bool(true)));
            if (d.hi_bounded()) out.push_back(Atom::make(Prim::FLe, {x, mk_int(d.hi)}, mk_bool(true)));
        }
        for (auto h : d.holes) out.push_back(Atom::neq(x, mk_int(h)));
    }
    for (const auto& a : cons_) out.push_back(a);
    return out;
}

bool FDStore::labeling_pending() const {
    for (const auto& a : cons_) {
        if (!a.is_prim() || a.prim != Prim::Labeling) continue;
        std::vector<ExprP> xs;
        if (!list_elems(a.args[1], xs)) continue;
        for (const auto& x : xs)
            if (is_var(x)) return true;
    }
    return false;
}

std::optional<LabelPick> FDStore::next_label(std::optional<LabelStrategy> force) const {
    for (const auto& a : cons_) {
        if (!a.is_prim() || a.prim != Prim::Labeling || !a.result_is(true)) continue;
        std::vector<ExprP> xs;
        if (!list_elems(a.args[1], xs)) continue;
        auto strat = force ? force : strategy_of(a.args[0]);
        if (!strat) continue;
        ExprP best;
        i64 best_size = 0;
        for (const auto& x : xs) {
            if (!is_var(x)) continue;
            auto it = dom_.find(x->id);
            i64 sz = it == dom_.end() ? FD_INF : it->second.size();
            if (!best || (*strat == LabelStrategy::FirstFail && sz < best_size)) {
                best = x;
                best_size = sz;
            }
            if (*strat == LabelStrategy::Naive) break;
        }
        if (!best) continue;
        auto it = dom_.find(best->id);
        if (it == dom_.end() || !it->second.bounded())
            throw FDError("labeling: unbounded domain for variable " + show(best));
        return LabelPick{best, it->second.values()};
    }
    return std::nullopt;
}

bool FDStore::assign(const ExprP& v, std::int64_t value) {
    if (failed_) return false;
    ExprP e = sigma_.apply(v);
    if (is_int(e)) return e->ival == value || !(failed_ = true);
    if (!bind_int(e, value)) return !(failed_ = true);
    return propagate();
}

bool FDStore::absorb(const Subst& s, bool& changed) {
    changed = false;
    if (failed_) return false;
    if (s.empty()) return true;
    for (const auto& [id, b] : s.bindings()) {
        auto it = dom_.find(id);
        if (it == dom_.end()) continue;
        changed = true;
        FDDomain d = it->second;
        const ExprP& val = b.second;
        dom_.erase(it);
        if (is_int(val)) {
            if (!d.contains(val->ival)) return !(failed_ = true);
        } else if (is_var(val)) {
            FDDomain& dx = dom(val);
            dx.intersect(d);
            if (dx.empty()) return !(failed_ = true);
        }
    }
    for (auto& a : cons_) {
        Atom n = apply_subst(a, s);
        if (!(n == a)) {
            changed = true;
            a = std::move(n);
        }
    }
    sigma_ = star(sigma_, s);
    return true;
}

std::set<VarId> FDStore::vars() const {
    std::set<VarId> out;
    for (const auto& [id, d] : dom_) out.insert(id);
    for (const auto& a : cons_) collect_vars(a, out);
    return out;
}

// ---------------------------------------------------------------- standalone solving

std::vector<FDSolution> solve_fd(const std::vector<Atom>& pi, std::optional<LabelStrategy> force) {
    FDStore s;
    for (const auto& a : pi)
        if (!s.post(a)) return {};
    if (!s.propagate()) return {};
    std::vector<FDSolution> out;
    std::vector<FDStore> stack{s};
    while (!stack.empty()) {
        FDStore cur = std::move(stack.back());
        stack.pop_back();
        auto pick = cur.next_label(force);
        if (!pick) {
            out.push_back({cur.residual(), cur.sigma()});
            continue;
        }
        for (auto it = pick->values.rbegin(); it != pick->values.rend(); ++it) {
            FDStore n = cur;
            if (n.assign(pick->var, *it)) stack.push_back(std::move(n));
        }
    }
    return out;
}

LabelResult label(const FDStore& store, LabelStrategy strategy, const std::vector<ExprP>& vars) {
    LabelResult res;
    std::function<void(const FDStore&, std::vector<ExprP>)> rec = [&](const FDStore& s, std::vector<ExprP> rest) {
        if (rest.empty()) {
            res.leaves.push_back(s);
            return;
        }
        std::size_t pick = 0;
        if (strategy == LabelStrategy::FirstFail) {
            i64 best = FD_INF + 1;
            for (std::size_t i = 0; i < rest.size(); ++i) {
                auto d = s.domain(rest[i]);
                i64 sz = d ? d->size() : FD_INF;
                if (sz < best) {
                    best = sz;
                    pick = i;
                }
            }
        }
        ExprP v = rest[pick];
        rest.erase(rest.begin() + static_cast<long>(pick));
        ExprP cur = s.sigma().apply(v);
        if (!is_var(cur)) {
            ++res.choices;
            rec(s, rest);
            return;
        }
        auto d = s.domain(cur);
        if (!d || !d->bounded()) throw FDError("labeling: unbounded domain for variable " + show(cur));
        for (i64 val : d->values()) {
            ++res.choices;
            FDStore n = s;
            if (n.assign(cur, val)) rec(n, rest);
        }
    };
    rec(store, vars);
    return res;
}

}  // namespace cclnc
