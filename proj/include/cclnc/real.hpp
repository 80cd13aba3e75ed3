#pragma once
// Linear real arithmetic over exact rationals: a bounded general simplex with
// infinitesimals for strict bounds. Non-linear atoms wait until instantiated.

#include "cclnc/kernel.hpp"

#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace cclnc {

// c + k·δ, δ a positive infinitesimal
struct DRat {
    Rat c, k;
    DRat() = default;
    DRat(Rat c_, Rat k_ = 0) : c(std::move(c_)), k(std::move(k_)) {}
    bool operator==(const DRat& o) const { return c == o.c && k == o.k; }
    bool operator<(const DRat& o) const { return c < o.c || (c == o.c && k < o.k); }
    bool operator<=(const DRat& o) const { return !(o < *this); }
    DRat operator+(const DRat& o) const { return {c + o.c, k + o.k}; }
    DRat operator-(const DRat& o) const { return {c - o.c, k - o.k}; }
    DRat operator*(const Rat& r) const { return {c * r, k * r}; }
    DRat operator/(const Rat& r) const { return {c / r, k / r}; }
};

struct LinearForm {
    std::map<VarId, Rat> coeffs;  // no zero entries
    Rat constant;

    void add(VarId v, const Rat& a);
    void add(const LinearForm& o, const Rat& k = 1);
    bool is_constant() const { return coeffs.empty(); }
};

class Simplex {
public:
    int add_var();
    int num_vars() const { return static_cast<int>(lo_.size()); }
    // new basic slack s = Σ a_i x_i over existing variables
    int add_row(const std::map<int, Rat>& lin);
    // tighten; false on immediate conflict
    bool set_lower(int v, const DRat& b);
    bool set_upper(int v, const DRat& b);
    bool check();
    // sup of Σ obj_i x_i over the feasible region; nullopt = unbounded. Requires check().
    std::optional<DRat> maximize(const std::map<int, Rat>& obj);
    const DRat& value(int v) const { return val_[static_cast<std::size_t>(v)]; }
    const std::optional<DRat>& lower(int v) const { return lo_[static_cast<std::size_t>(v)]; }
    const std::optional<DRat>& upper(int v) const { return hi_[static_cast<std::size_t>(v)]; }

private:
    void update(int j, const DRat& v);
    void pivot_and_update(int b, int j, const DRat& v);
    void pivot(int b, int j);
    bool violates(int v) const;

    std::vector<std::optional<DRat>> lo_, hi_;
    std::vector<DRat> val_;
    std::vector<int> row_of_;                 // -1 if nonbasic
    std::vector<int> basic_;                  // row -> basic var
    std::vector<std::map<int, Rat>> rows_;    // basic = Σ coeff · nonbasic
};

// R-specific: R primitives, or == / /= over real variables and numeric constants
bool is_r_atom(const Atom& a);
std::optional<bool> r_eval(const Atom& a);

class RStore {
public:
    // false = FAIL
    bool post(const Atom& a);
    // several atoms, one consistency check
    bool post_all(const std::vector<Atom>& as);
    // satisfiability, fixed-variable binding, reified decisions, wake-ups
    bool solve();
    bool wake_delayed(const Subst& s);
    bool failed() const { return failed_; }

    const Subst& sigma() const { return sigma_; }
    std::vector<Atom> residual() const { return atoms_; }
    std::vector<Atom> delayed() const;  // non-linear atoms
    // does the linear part entail the (linear) atom a?
    bool entails(const Atom& a) const;
    // implied bounds of a variable: (inf, sup), nullopt = unbounded side
    std::pair<std::optional<DRat>, std::optional<DRat>> bounds(const ExprP& v) const;

private:
    void substitute(const Subst& s);
    std::vector<Atom> atoms_;
    Subst sigma_;
    bool failed_ = false;
};

struct RResult {
    bool fail = false;
    std::vector<Atom> atoms;
    Subst sigma;
};
RResult solve_r(const std::vector<Atom>& pi);

}  // namespace cclnc
