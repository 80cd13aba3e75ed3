#pragma once
// Core term language: expressions, substitutions, atomic constraints, stores.

#include <gmpxx.h>

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace cclnc {

using Rat = mpq_class;
using VarId = std::uint64_t;

enum class SymKind : std::uint8_t { Constructor, Defined, Primitive };
enum class BaseType : std::uint8_t { Unknown, Int, Real, Bool };
enum class ExprKind : std::uint8_t { Var, Int, Real, Bool, Sym, App, Bottom };

struct Expr;
using ExprP = std::shared_ptr<const Expr>;

struct Expr {
    ExprKind kind;
    BaseType tag = BaseType::Unknown;  // static type hint for variables
    SymKind skind = SymKind::Constructor;
    bool bval = false;
    int arity = 0;
    std::int64_t ival = 0;
    VarId id = 0;
    const std::string* name = nullptr;  // interned; Var and Sym
    std::shared_ptr<const Rat> rval;
    ExprP fun, arg;
};

const std::string* intern(const std::string& s);

// constructors
ExprP mk_var(const std::string& name, BaseType tag = BaseType::Unknown);
ExprP mk_var_with_id(VarId id, const std::string* name, BaseType tag);
ExprP fresh_like(const ExprP& v);  // fresh variable named after v, same tag
ExprP mk_fresh_var(const std::string& base, BaseType tag = BaseType::Unknown);  // "base_<k>"
void reset_fresh_names(std::uint64_t from = 1);  // restart k (per thread); the engine does this per goal
ExprP mk_int(std::int64_t v);
ExprP mk_real(const Rat& r);
ExprP mk_bool(bool b);
ExprP mk_sym(SymKind k, const std::string& name, int arity);
ExprP mk_app(ExprP f, ExprP a);
ExprP mk_apps(ExprP h, const std::vector<ExprP>& args);
ExprP mk_bottom();
VarId next_var_id();

// builtin constructors
ExprP nil_sym();
ExprP cons_sym();
ExprP tup_sym(int n);
ExprP mk_list(const std::vector<ExprP>& xs, ExprP tail = nullptr);
ExprP mk_tuple(const std::vector<ExprP>& xs);

inline bool is_var(const ExprP& e) { return e->kind == ExprKind::Var; }
inline bool is_app(const ExprP& e) { return e->kind == ExprKind::App; }
inline bool is_base(const ExprP& e) {
    return e->kind == ExprKind::Int || e->kind == ExprKind::Real || e->kind == ExprKind::Bool;
}
bool is_numeric(const ExprP& e);          // Int or Real constant
std::optional<Rat> numeric_value(const ExprP& e);
// "3", "-1/10", "0.05" (exact); std::invalid_argument otherwise
Rat parse_rational(const std::string& s);

// spine view: h e1 ... em
ExprP head(const ExprP& e);
std::vector<ExprP> args(const ExprP& e);
int nargs(const ExprP& e);

bool expr_eq(const ExprP& a, const ExprP& b);
bool occurs(VarId x, const ExprP& e);
void collect_vars(const ExprP& e, std::set<VarId>& out);
void collect_vars(const ExprP& e, std::map<VarId, ExprP>& out);
std::set<VarId> vars_of(const ExprP& e);
std::size_t expr_size(const ExprP& e);
int expr_depth(const ExprP& e);
bool is_ground(const ExprP& e);

bool is_pattern(const ExprP& e);
bool is_total(const ExprP& e);  // no Bottom
// Passive: h e1..em with h constructor (m<=ar), or defined/primitive with m<ar, or base value
bool is_passive(const ExprP& e);
bool info_leq(const ExprP& a, const ExprP& b);

// ---------------------------------------------------------------- substitutions

class Subst {
public:
    Subst() = default;
    bool empty() const { return m_.empty(); }
    std::size_t size() const { return m_.size(); }
    void bind(const ExprP& var, const ExprP& value);
    void erase(VarId x) { m_.erase(x); }
    const ExprP* lookup(VarId x) const;
    bool binds(VarId x) const { return m_.count(x) != 0; }
    ExprP apply(const ExprP& e) const;
    std::set<VarId> vdom() const;
    // (var, value) pairs ordered by var id
    const std::map<VarId, std::pair<ExprP, ExprP>>& bindings() const { return m_; }
    bool operator==(const Subst& o) const;
    bool idempotent() const;

private:
    std::map<VarId, std::pair<ExprP, ExprP>> m_;
};

ExprP apply_subst(const ExprP& e, const Subst& s);
// e(σθ) = (eσ)θ
Subst compose(const Subst& sigma, const Subst& theta);
// σ⋆θ: σθ restricted to vdom(σ)
Subst star(const Subst& sigma, const Subst& theta);

// ---------------------------------------------------------------- primitives

enum class Prim : std::uint8_t {
    Eq,        // (==)        A -> A -> bool
    SEq,       // (#==)       int -> real -> bool
    RAdd, RSub, RMul, RDiv, RLe,
    FAdd, FSub, FMul, FDiv, FLe,
    Domain, Belongs, Labeling,
};

enum class PrimDomain : std::uint8_t { H, M, FD, R };

struct PrimInfo {
    Prim prim;
    const char* name;  // surface name, e.g. "+", "#<=", "domain"
    int arity;
    PrimDomain domain;
};

const PrimInfo& prim_info(Prim p);
std::optional<Prim> prim_by_name(const std::string& name);
ExprP prim_sym(Prim p);
std::optional<Prim> as_prim(const ExprP& sym);

// ---------------------------------------------------------------- atoms

struct Atom {
    enum class Kind : std::uint8_t { True, False, Prim } kind = Kind::True;
    Prim prim = Prim::Eq;
    std::vector<ExprP> args;
    ExprP result;

    static Atom truth() { return Atom{}; }
    static Atom falsity() {
        Atom a;
        a.kind = Kind::False;
        return a;
    }
    static Atom make(Prim p, std::vector<ExprP> as, ExprP res);
    static Atom eq(ExprP a, ExprP b) { return make(Prim::Eq, {std::move(a), std::move(b)}, mk_bool(true)); }
    static Atom neq(ExprP a, ExprP b) { return make(Prim::Eq, {std::move(a), std::move(b)}, mk_bool(false)); }
    static Atom bridge(ExprP x, ExprP rx) { return make(Prim::SEq, {std::move(x), std::move(rx)}, mk_bool(true)); }

    bool is_prim() const { return kind == Kind::Prim; }
    bool result_is(bool b) const;
    bool is_eq() const { return is_prim() && prim == Prim::Eq && result_is(true); }
    bool is_neq() const { return is_prim() && prim == Prim::Eq && result_is(false); }
    bool is_bridge() const { return is_prim() && prim == Prim::SEq && result_is(true); }
    bool is_antibridge() const { return is_prim() && prim == Prim::SEq && result_is(false); }
    bool primitive_args() const;  // all args are patterns
    bool operator==(const Atom& o) const;
};

Atom apply_subst(const Atom& a, const Subst& s);
void collect_vars(const Atom& a, std::set<VarId>& out);
void collect_vars(const Atom& a, std::map<VarId, ExprP>& out);
std::set<VarId> vars_of(const Atom& a);
std::set<VarId> odvar(const Atom& a);
std::size_t atom_size(const Atom& a);

// ---------------------------------------------------------------- stores

struct Store {
    std::vector<Atom> atoms;
    Subst sigma;

    void add(const Atom& a);  // set semantics; drops ◇
    bool contains(const Atom& a) const;
    std::set<VarId> vars() const;
    std::set<VarId> odvars() const;
    bool has_false() const;
};

bool same_atoms(const std::vector<Atom>& a, const std::vector<Atom>& b);  // as sets

// ---------------------------------------------------------------- printing

std::string show(const ExprP& e);
// prec: 0 top, 5 operand of a comparison, 10 application argument
std::string show_prec(const ExprP& e, int prec);
std::string show(const Atom& a);
std::string show(const Subst& s);
std::string show(const std::vector<Atom>& as);
std::string show_rat(const Rat& r);

}  // namespace cclnc
