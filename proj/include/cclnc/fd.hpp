#pragma once
// Finite-domain solver: interval domains with holes, bounds propagation,
// labeling (naive / first-fail).

#include "cclnc/kernel.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace cclnc {

constexpr std::int64_t FD_INF = std::int64_t(1) << 62;  // |v| >= FD_INF means unbounded

struct FDError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FDDomain {
    std::int64_t lo = -FD_INF, hi = FD_INF;
    std::vector<std::int64_t> holes;  // sorted, strictly inside (lo, hi)

    bool lo_bounded() const { return lo > -FD_INF; }
    bool hi_bounded() const { return hi < FD_INF; }
    bool bounded() const { return lo_bounded() && hi_bounded(); }
    bool empty() const { return lo > hi; }
    bool singleton() const { return lo == hi; }
    std::int64_t size() const;  // saturates at FD_INF
    bool contains(std::int64_t v) const;
    // each returns true if the domain changed
    bool set_lo(std::int64_t v);
    bool set_hi(std::int64_t v);
    bool remove(std::int64_t v);
    bool intersect(const FDDomain& o);
    bool keep_only(const std::vector<std::int64_t>& vals);
    std::vector<std::int64_t> values() const;  // bounded domains only
    bool operator==(const FDDomain& o) const = default;

private:
    void normalize();
};

std::string show(const FDDomain& d);

enum class LabelStrategy { Naive, FirstFail };

// FD-specific: FD primitives, or == / /= over int variables and int constants.
bool is_fd_atom(const Atom& a);

struct LabelPick {
    ExprP var;
    std::vector<std::int64_t> values;  // ascending
};

class FDStore {
public:
    // false = FAIL; the store is unusable afterwards
    bool post(const Atom& a);
    bool propagate();
    bool failed() const { return failed_; }

    const Subst& sigma() const { return sigma_; }
    std::optional<FDDomain> domain(const ExprP& v) const;
    std::optional<FDDomain> domain(VarId v) const;
    // solved-form constraints: domain encodings followed by pending constraints
    std::vector<Atom> residual() const;
    // atoms posted, still pending (no domain encodings)
    const std::vector<Atom>& pending() const { return cons_; }

    bool labeling_pending() const;
    // next variable to enumerate for the leftmost unfinished labeling atom;
    // throws FDError naming the variable if its domain is unbounded.
    std::optional<LabelPick> next_label(std::optional<LabelStrategy> force = std::nullopt) const;
    // bind v to value and propagate; false = FAIL
    bool assign(const ExprP& v, std::int64_t value);

    // bindings computed elsewhere: checked against domains, merged for
    // var-var, applied to pending constraints; σ_F becomes σ_F ⋆ s.
    // false = FAIL. changed tells whether any variable of the store was hit.
    bool absorb(const Subst& s, bool& changed);
    std::set<VarId> vars() const;

private:
    bool bind_var(const ExprP& y, const ExprP& x);  // y := x
    bool bind_int(const ExprP& y, std::int64_t v);
    void substitute(const Subst& s);
    FDDomain& dom(const ExprP& v);
    std::int64_t lo(const ExprP& e);
    std::int64_t hi(const ExprP& e);
    bool fixed(const ExprP& e, std::int64_t& v);
    enum class PR { Fail, Keep, Drop };
    PR run(Atom& a, bool& changed);
    PR arith(Atom& a, bool& changed);
    PR reify(Atom& a, bool& changed);
    bool label_var(VarId v) const;
    bool tighten(const ExprP& e, std::int64_t l, std::int64_t h, bool& changed);
    bool remove_value(const ExprP& e, std::int64_t v, bool& changed);

    std::vector<Atom> cons_;
    std::map<VarId, FDDomain> dom_;
    std::map<VarId, ExprP> var_;
    std::vector<VarId> order_;  // first-seen order
    Subst sigma_;
    bool failed_ = false;
};

struct FDSolution {
    std::vector<Atom> atoms;
    Subst sigma;
};

// post + propagate + full labeling of every labeling atom; empty = failure.
// Throws FDError on non-FD atoms or unbounded labeling.
std::vector<FDSolution> solve_fd(const std::vector<Atom>& pi, std::optional<LabelStrategy> force = std::nullopt);

struct LabelResult {
    std::vector<FDStore> leaves;
    std::size_t choices = 0;  // one per value tried
};
LabelResult label(const FDStore& store, LabelStrategy strategy, const std::vector<ExprP>& vars);

// ground evaluation of an FD atom; nullopt when not ground
std::optional<bool> fd_eval(const Atom& a);

}  // namespace cclnc
