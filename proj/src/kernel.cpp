#include "cclnc/kernel.hpp"

#include <atomic>
#include <mutex>
#include <sstream>
#include <unordered_set>

namespace cclnc {

namespace {
std::atomic<VarId> g_next_var{1};
// display suffix of fresh variables; identity is the id, so names only need to
// be distinct within one derivation
thread_local std::uint64_t g_fresh_name = 1;
}

const std::string* intern(const std::string& s) {
    static std::mutex mu;
    static std::unordered_set<std::string> table;
    std::lock_guard<std::mutex> lock(mu);
    return &*table.insert(s).first;
}

VarId next_var_id() { return g_next_var.fetch_add(1); }

ExprP mk_var_with_id(VarId id, const std::string* name, BaseType tag) {
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::Var;
    e->id = id;
    e->name = name;
    e->tag = tag;
    return e;
}

ExprP mk_var(const std::string& name, BaseType tag) { return mk_var_with_id(next_var_id(), intern(name), tag); }

ExprP mk_fresh_var(const std::string& base, BaseType tag) {
    std::string b = base;
    auto us = b.rfind('_');
    if (us != std::string::npos && us + 1 < b.size() &&
        b.find_first_not_of("0123456789", us + 1) == std::string::npos)
        b.resize(us);
    return mk_var_with_id(next_var_id(), intern(b + "_" + std::to_string(g_fresh_name++)), tag);
}

void reset_fresh_names(std::uint64_t from) { g_fresh_name = from; }

ExprP fresh_like(const ExprP& v) { return mk_fresh_var(v->name ? *v->name : "V", v->tag); }

ExprP mk_int(std::int64_t v) {
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::Int;
    e->ival = v;
    return e;
}

ExprP mk_real(const Rat& r) {
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::Real;
    e->rval = std::make_shared<const Rat>(r);
    return e;
}

ExprP mk_bool(bool b) {
    static const ExprP t = [] {
        auto e = std::make_shared<Expr>();
        e->kind = ExprKind::Bool;
        e->bval = true;
        return e;
    }();
    static const ExprP f = [] {
        auto e = std::make_shared<Expr>();
        e->kind = ExprKind::Bool;
        return e;
    }();
    return b ? t : f;
}

ExprP mk_sym(SymKind k, const std::string& name, int arity) {
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::Sym;
    e->skind = k;
    e->name = intern(name);
    e->arity = arity;
    return e;
}

ExprP mk_app(ExprP f, ExprP a) {
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::App;
    e->fun = std::move(f);
    e->arg = std::move(a);
    return e;
}

ExprP mk_apps(ExprP h, const std::vector<ExprP>& as) {
    for (const auto& a : as) h = mk_app(h, a);
    return h;
}

ExprP mk_bottom() {
    static const ExprP b = [] {
        auto e = std::make_shared<Expr>();
        e->kind = ExprKind::Bottom;
        return e;
    }();
    return b;
}

ExprP nil_sym() {
    static const ExprP s = mk_sym(SymKind::Constructor, "[]", 0);
    return s;
}
ExprP cons_sym() {
    static const ExprP s = mk_sym(SymKind::Constructor, ":", 2);
    return s;
}
ExprP tup_sym(int n) {
    static std::mutex mu;
    static std::map<int, ExprP> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& s = cache[n];
    if (!s) s = mk_sym(SymKind::Constructor, "tup" + std::to_string(n), n);
    return s;
}

ExprP mk_list(const std::vector<ExprP>& xs, ExprP tail) {
    ExprP r = tail ? tail : nil_sym();
    for (auto it = xs.rbegin(); it != xs.rend(); ++it) r = mk_apps(cons_sym(), {*it, r});
    return r;
}

ExprP mk_tuple(const std::vector<ExprP>& xs) { return mk_apps(tup_sym(static_cast<int>(xs.size())), xs); }

bool is_numeric(const ExprP& e) { return e->kind == ExprKind::Int || e->kind == ExprKind::Real; }

std::optional<Rat> numeric_value(const ExprP& e) {
    if (e->kind == ExprKind::Int) return Rat(static_cast<long>(e->ival));
    if (e->kind == ExprKind::Real) return *e->rval;
    return std::nullopt;
}

ExprP head(const ExprP& e) {
    const Expr* p = e.get();
    ExprP h = e;
    while (p->kind == ExprKind::App) {
        h = p->fun;
        p = h.get();
    }
    return h;
}

std::vector<ExprP> args(const ExprP& e) {
    std::vector<ExprP> out;
    const Expr* p = e.get();
    while (p->kind == ExprKind::App) {
        out.push_back(p->arg);
        p = p->fun.get();
    }
    return {out.rbegin(), out.rend()};
}

int nargs(const ExprP& e) {
    int n = 0;
    for (const Expr* p = e.get(); p->kind == ExprKind::App; p = p->fun.get()) ++n;
    return n;
}

bool expr_eq(const ExprP& a, const ExprP& b) {
    if (a == b) return true;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case ExprKind::Var: return a->id == b->id;
        case ExprKind::Int: return a->ival == b->ival;
        case ExprKind::Real: return *a->rval == *b->rval;
        case ExprKind::Bool: return a->bval == b->bval;
        case ExprKind::Sym: return a->name == b->name && a->skind == b->skind && a->arity == b->arity;
        case ExprKind::App: return expr_eq(a->fun, b->fun) && expr_eq(a->arg, b->arg);
        case ExprKind::Bottom: return true;
    }
    return false;
}

bool occurs(VarId x, const ExprP& e) {
    switch (e->kind) {
        case ExprKind::Var: return e->id == x;
        case ExprKind::App: return occurs(x, e->fun) || occurs(x, e->arg);
        default: return false;
    }
}

void collect_vars(const ExprP& e, std::set<VarId>& out) {
    if (e->kind == ExprKind::Var)
        out.insert(e->id);
    else if (e->kind == ExprKind::App) {
        collect_vars(e->fun, out);
        collect_vars(e->arg, out);
    }
}

void collect_vars(const ExprP& e, std::map<VarId, ExprP>& out) {
    if (e->kind == ExprKind::Var)
        out.emplace(e->id, e);
    else if (e->kind == ExprKind::App) {
        collect_vars(e->fun, out);
        collect_vars(e->arg, out);
    }
}

std::set<VarId> vars_of(const ExprP& e) {
    std::set<VarId> s;
    collect_vars(e, s);
    return s;
}

std::size_t expr_size(const ExprP& e) {
    if (e->kind == ExprKind::App) return expr_size(e->fun) + expr_size(e->arg);
    return 1;
}

int expr_depth(const ExprP& e) {
    if (e->kind != ExprKind::App) return 0;
    int d = 0;
    for (const auto& a : args(e)) d = std::max(d, expr_depth(a));
    return d + 1;
}

bool is_ground(const ExprP& e) {
    switch (e->kind) {
        case ExprKind::Var: return false;
        case ExprKind::App: return is_ground(e->fun) && is_ground(e->arg);
        default: return true;
    }
}

namespace {
// m args applied to h: can the application be a pattern head?
bool head_admits(const ExprP& h, int m) {
    if (h->kind == ExprKind::Sym) {
        if (h->skind == SymKind::Constructor) return m <= h->arity;
        return m < h->arity;
    }
    if (is_base(h)) return m == 0;
    return false;
}
}  // namespace

bool is_pattern(const ExprP& e) {
    if (e->kind == ExprKind::Var) return true;
    if (e->kind == ExprKind::Bottom) return false;
    ExprP h = head(e);
    if (h->kind == ExprKind::Var) return false;
    if (!head_admits(h, nargs(e))) return false;
    for (const Expr* p = e.get(); p->kind == ExprKind::App; p = p->fun.get())
        if (!is_pattern(p->arg)) return false;
    return true;
}

bool is_total(const ExprP& e) {
    if (e->kind == ExprKind::Bottom) return false;
    if (e->kind == ExprKind::App) return is_total(e->fun) && is_total(e->arg);
    return true;
}

bool is_passive(const ExprP& e) {
    if (e->kind == ExprKind::Var || e->kind == ExprKind::Bottom) return false;
    ExprP h = head(e);
    if (h->kind == ExprKind::Var) return false;
    return head_admits(h, nargs(e));
}

bool info_leq(const ExprP& a, const ExprP& b) {
    if (a->kind == ExprKind::Bottom) return true;
    if (a->kind == ExprKind::App) {
        if (b->kind != ExprKind::App) return false;
        return info_leq(a->fun, b->fun) && info_leq(a->arg, b->arg);
    }
    return expr_eq(a, b);
}

// ---------------------------------------------------------------- substitutions

void Subst::bind(const ExprP& var, const ExprP& value) {
    if (is_var(value) && value->id == var->id) {
        m_.erase(var->id);
        return;
    }
    m_[var->id] = {var, value};
}

const ExprP* Subst::lookup(VarId x) const {
    auto it = m_.find(x);
    return it == m_.end() ? nullptr : &it->second.second;
}

ExprP Subst::apply(const ExprP& e) const {
    if (m_.empty()) return e;
    switch (e->kind) {
        case ExprKind::Var: {
            auto it = m_.find(e->id);
            return it == m_.end() ? e : it->second.second;
        }
        case ExprKind::App: {
            ExprP f = apply(e->fun), a = apply(e->arg);
            if (f == e->fun && a == e->arg) return e;
            return mk_app(std::move(f), std::move(a));
        }
        default: return e;
    }
}

std::set<VarId> Subst::vdom() const {
    std::set<VarId> s;
    for (const auto& [k, v] : m_) s.insert(k);
    return s;
}

bool Subst::operator==(const Subst& o) const {
    if (m_.size() != o.m_.size()) return false;
    for (const auto& [k, v] : m_) {
        auto it = o.m_.find(k);
        if (it == o.m_.end() || !expr_eq(v.second, it->second.second)) return false;
    }
    return true;
}

bool Subst::idempotent() const {
    for (const auto& [k, v] : m_)
        if (!expr_eq(apply(v.second), v.second)) return false;
    return true;
}

ExprP apply_subst(const ExprP& e, const Subst& s) { return s.apply(e); }

Subst compose(const Subst& sigma, const Subst& theta) {
    Subst r;
    for (const auto& [k, v] : sigma.bindings()) r.bind(v.first, theta.apply(v.second));
    for (const auto& [k, v] : theta.bindings())
        if (!sigma.binds(k)) r.bind(v.first, v.second);
    return r;
}

Subst star(const Subst& sigma, const Subst& theta) {
    Subst r;
    for (const auto& [k, v] : sigma.bindings()) r.bind(v.first, theta.apply(v.second));
    return r;
}

// ---------------------------------------------------------------- primitives

namespace {
const PrimInfo kPrims[] = {
    {Prim::Eq, "==", 2, PrimDomain::H},        {Prim::SEq, "#==", 2, PrimDomain::M},
    {Prim::RAdd, "+", 2, PrimDomain::R},       {Prim::RSub, "-", 2, PrimDomain::R},
    {Prim::RMul, "*", 2, PrimDomain::R},       {Prim::RDiv, "/", 2, PrimDomain::R},
    {Prim::RLe, "<=", 2, PrimDomain::R},       {Prim::FAdd, "#+", 2, PrimDomain::FD},
    {Prim::FSub, "#-", 2, PrimDomain::FD},     {Prim::FMul, "#*", 2, PrimDomain::FD},
    {Prim::FDiv, "#/", 2, PrimDomain::FD},     {Prim::FLe, "#<=", 2, PrimDomain::FD},
    {Prim::Domain, "domain", 3, PrimDomain::FD}, {Prim::Belongs, "belongs", 2, PrimDomain::FD},
    {Prim::Labeling, "labeling", 2, PrimDomain::FD},
};
}

const PrimInfo& prim_info(Prim p) { return kPrims[static_cast<int>(p)]; }

std::optional<Prim> prim_by_name(const std::string& name) {
    for (const auto& pi : kPrims)
        if (name == pi.name) return pi.prim;
    return std::nullopt;
}

ExprP prim_sym(Prim p) {
    static const std::vector<ExprP> syms = [] {
        std::vector<ExprP> v;
        for (const auto& pi : kPrims) v.push_back(mk_sym(SymKind::Primitive, pi.name, pi.arity));
        return v;
    }();
    return syms[static_cast<int>(p)];
}

std::optional<Prim> as_prim(const ExprP& sym) {
    if (sym->kind != ExprKind::Sym || sym->skind != SymKind::Primitive) return std::nullopt;
    return prim_by_name(*sym->name);
}

// ---------------------------------------------------------------- atoms

Atom Atom::make(Prim p, std::vector<ExprP> as, ExprP res) {
    Atom a;
    a.kind = Kind::Prim;
    a.prim = p;
    a.args = std::move(as);
    a.result = std::move(res);
    return a;
}

bool Atom::result_is(bool b) const {
    return result && result->kind == ExprKind::Bool && result->bval == b;
}

bool Atom::primitive_args() const {
    for (const auto& x : args)
        if (!is_pattern(x)) return false;
    return true;
}

bool Atom::operator==(const Atom& o) const {
    if (kind != o.kind) return false;
    if (kind != Kind::Prim) return true;
    if (prim != o.prim || args.size() != o.args.size()) return false;
    for (std::size_t i = 0; i < args.size(); ++i)
        if (!expr_eq(args[i], o.args[i])) return false;
    return expr_eq(result, o.result);
}

Atom apply_subst(const Atom& a, const Subst& s) {
    if (!a.is_prim() || s.empty()) return a;
    Atom r = a;
    for (auto& x : r.args) x = s.apply(x);
    r.result = s.apply(r.result);
    return r;
}

void collect_vars(const Atom& a, std::set<VarId>& out) {
    if (!a.is_prim()) return;
    for (const auto& x : a.args) collect_vars(x, out);
    collect_vars(a.result, out);
}

void collect_vars(const Atom& a, std::map<VarId, ExprP>& out) {
    if (!a.is_prim()) return;
    for (const auto& x : a.args) collect_vars(x, out);
    collect_vars(a.result, out);
}

std::set<VarId> vars_of(const Atom& a) {
    std::set<VarId> s;
    collect_vars(a, s);
    return s;
}

std::set<VarId> odvar(const Atom& a) {
    if (!a.is_prim()) return {};
    if (a.prim != Prim::Eq) return vars_of(a);
    if (is_var(a.result)) return {a.result->id};
    const ExprP& l = a.args[0];
    const ExprP& r = a.args[1];
    if (a.result_is(true)) {
        if (is_var(l) && is_var(r)) return {l->id, r->id};
    } else if (a.result_is(false)) {
        if (is_var(l) && is_var(r)) {
            if (l->id == r->id) return {};
            return {l->id, r->id};
        }
    } else {
        return {};
    }
    if (is_var(l)) return {l->id};
    if (is_var(r)) return {r->id};
    return {};
}

std::size_t atom_size(const Atom& a) {
    if (!a.is_prim()) return 1;
    std::size_t n = 1 + expr_size(a.result);
    for (const auto& x : a.args) n += expr_size(x);
    return n;
}

// ---------------------------------------------------------------- stores

void Store::add(const Atom& a) {
    if (a.kind == Atom::Kind::True) return;
    if (!contains(a)) atoms.push_back(a);
}

bool Store::contains(const Atom& a) const {
    for (const auto& b : atoms)
        if (b == a) return true;
    return false;
}

std::set<VarId> Store::vars() const {
    std::set<VarId> s;
    for (const auto& a : atoms) collect_vars(a, s);
    return s;
}

std::set<VarId> Store::odvars() const {
    std::set<VarId> s;
    for (const auto& a : atoms) {
        auto o = odvar(a);
        s.insert(o.begin(), o.end());
    }
    return s;
}

bool Store::has_false() const {
    for (const auto& a : atoms)
        if (a.kind == Atom::Kind::False) return true;
    return false;
}

bool same_atoms(const std::vector<Atom>& a, const std::vector<Atom>& b) {
    auto sub = [](const std::vector<Atom>& x, const std::vector<Atom>& y) {
        for (const auto& p : x) {
            bool found = false;
            for (const auto& q : y)
                if (p == q) {
                    found = true;
                    break;
                }
            if (!found) return false;
        }
        return true;
    };
    return sub(a, b) && sub(b, a);
}

// ---------------------------------------------------------------- printing

std::string show_rat(const Rat& r) {
    mpz_class den = r.get_den();
    mpz_class d = den;
    while (d % 2 == 0) d /= 2;
    while (d % 5 == 0) d /= 5;
    if (d != 1) return r.get_num().get_str() + "/" + den.get_str();
    // terminating decimal
    mpz_class num = r.get_num();
    bool neg = num < 0;
    if (neg) num = -num;
    mpz_class ip = num / den, rem = num % den;
    std::string s = (neg ? "-" : "") + ip.get_str() + ".";
    if (rem == 0) return s + "0";
    while (rem != 0) {
        rem *= 10;
        mpz_class digit = rem / den;
        s += digit.get_str();
        rem %= den;
    }
    return s;
}

namespace {

int infix_prec(const std::string& op) {
    if (op == "*" || op == "/" || op == "#*" || op == "#/") return 7;
    if (op == "+" || op == "-" || op == "#+" || op == "#-") return 6;
    if (op == ":") return 5;
    if (op == "==" || op == "<=" || op == "#<=" || op == "#==") return 4;
    return -1;
}

bool proper_list(const ExprP& e, std::vector<ExprP>& items) {
    ExprP cur = e;
    while (true) {
        if (cur->kind == ExprKind::Sym && cur->name == nil_sym()->name) return true;
        if (nargs(cur) == 2) {
            ExprP h = head(cur);
            if (h->kind == ExprKind::Sym && h->name == cons_sym()->name) {
                auto as = args(cur);
                items.push_back(as[0]);
                cur = as[1];
                continue;
            }
        }
        return false;
    }
}

void show_into(std::ostringstream& os, const ExprP& e, int prec);

std::string var_name(const ExprP& v) {
    std::string base = v->name ? *v->name : "_";
    return base;
}

void show_into(std::ostringstream& os, const ExprP& e, int prec) {
    switch (e->kind) {
        case ExprKind::Var: os << var_name(e); return;
        case ExprKind::Int:
            if (e->ival < 0 && prec > 5)
                os << "(" << e->ival << ")";
            else
                os << e->ival;
            return;
        case ExprKind::Real: {
            std::string s = show_rat(*e->rval);
            if (s[0] == '-' && prec > 5)
                os << "(" << s << ")";
            else
                os << s;
            return;
        }
        case ExprKind::Bool: os << (e->bval ? "true" : "false"); return;
        case ExprKind::Bottom: os << "_|_"; return;
        case ExprKind::Sym: {
            const std::string& n = *e->name;
            if (infix_prec(n) >= 0 || n == ":")
                os << "(" << n << ")";
            else if (n.rfind("tup", 0) == 0 && e->skind == SymKind::Constructor && n.size() > 3 &&
                     std::isdigit(static_cast<unsigned char>(n[3])))
                os << "(" << std::string(static_cast<std::size_t>(e->arity - 1), ',') << ")";
            else
                os << n;
            return;
        }
        case ExprKind::App: break;
    }
    ExprP h = head(e);
    auto as = args(e);
    if (h->kind == ExprKind::Sym) {
        const std::string& n = *h->name;
        std::vector<ExprP> items;
        if (n == ":" && proper_list(e, items)) {
            os << "[";
            for (std::size_t i = 0; i < items.size(); ++i) {
                if (i) os << ", ";
                show_into(os, items[i], 0);
            }
            os << "]";
            return;
        }
        if (h->skind == SymKind::Constructor && n.rfind("tup", 0) == 0 && h->arity == static_cast<int>(as.size())) {
            os << "(";
            for (std::size_t i = 0; i < as.size(); ++i) {
                if (i) os << ", ";
                show_into(os, as[i], 0);
            }
            os << ")";
            return;
        }
        int ip = infix_prec(n);
        if (ip >= 0 && as.size() == 2) {
            bool paren = prec > ip;
            if (paren) os << "(";
            bool right = (n == ":");
            show_into(os, as[0], right ? ip + 1 : ip);
            os << " " << n << " ";
            show_into(os, as[1], right ? ip : ip + 1);
            if (paren) os << ")";
            return;
        }
    }
    bool paren = prec > 9;
    if (paren) os << "(";
    show_into(os, h, 10);
    for (const auto& a : as) {
        os << " ";
        show_into(os, a, 10);
    }
    if (paren) os << ")";
}

}  // namespace

std::string show(const ExprP& e) { return show_prec(e, 0); }

std::string show_prec(const ExprP& e, int prec) {
    std::ostringstream os;
    show_into(os, e, prec);
    return os.str();
}

std::string show(const Atom& a) {
    if (a.kind == Atom::Kind::True) return "◇";
    if (a.kind == Atom::Kind::False) return "◆";
    const PrimInfo& pi = prim_info(a.prim);
    std::ostringstream os;
    auto s = [](const ExprP& e) {
        std::ostringstream o;
        show_into(o, e, 5);
        return o.str();
    };
    bool t = a.result_is(true), f = a.result_is(false);
    switch (a.prim) {
        case Prim::Eq:
            if (t) return s(a.args[0]) + " == " + s(a.args[1]);
            if (f) return s(a.args[0]) + " /= " + s(a.args[1]);
            return "(" + s(a.args[0]) + " == " + s(a.args[1]) + ") ->! " + show(a.result);
        case Prim::SEq:
            if (t) return s(a.args[0]) + " #== " + s(a.args[1]);
            if (f) return s(a.args[0]) + " #/== " + s(a.args[1]);
            return "(" + s(a.args[0]) + " #== " + s(a.args[1]) + ") ->! " + show(a.result);
        case Prim::RLe:
        case Prim::FLe: {
            std::string op = a.prim == Prim::RLe ? "<=" : "#<=";
            std::string lt = a.prim == Prim::RLe ? "<" : "#<";
            if (t) return s(a.args[0]) + " " + op + " " + s(a.args[1]);
            if (f) return s(a.args[1]) + " " + lt + " " + s(a.args[0]);
            return "(" + s(a.args[0]) + " " + op + " " + s(a.args[1]) + ") ->! " + show(a.result);
        }
        case Prim::RAdd: case Prim::RSub: case Prim::RMul: case Prim::RDiv:
        case Prim::FAdd: case Prim::FSub: case Prim::FMul: case Prim::FDiv:
        {
            // operands bind like the infix operator itself
            int ip = infix_prec(pi.name);
            std::ostringstream l, r;
            show_into(l, a.args[0], ip);
            show_into(r, a.args[1], ip + 1);
            return l.str() + " " + pi.name + " " + r.str() + " ->! " + show(a.result);
        }
        default: break;
    }
    os << pi.name;
    for (const auto& x : a.args) {
        os << " ";
        show_into(os, x, 10);
    }
    if (!t) os << " ->! " << show(a.result);
    return os.str();
}

std::string show(const Subst& sub) {
    std::ostringstream os;
    os << "{";
    bool first = true;
    for (const auto& [k, v] : sub.bindings()) {
        if (!first) os << ", ";
        first = false;
        os << show(v.first) << " -> " << show(v.second);
    }
    os << "}";
    return os.str();
}

std::string show(const std::vector<Atom>& as) {
    std::string r;
    for (std::size_t i = 0; i < as.size(); ++i) {
        if (i) r += ", ";
        r += show(as[i]);
    }
    return r;
}


Rat parse_rational(const std::string& s) {
    std::string t = s;
    auto dot = t.find('.');
    if (dot != std::string::npos) {
        std::string frac = t.substr(dot + 1);
        if (frac.empty() || frac.find_first_not_of("0123456789") != std::string::npos) throw std::invalid_argument(s);
        t = t.substr(0, dot) + frac + "/1" + std::string(frac.size(), '0');
    }
    Rat q;
    if (t.empty() || q.set_str(t, 10) != 0) throw std::invalid_argument(s);
    q.canonicalize();
    return q;
}

}  // namespace cclnc
