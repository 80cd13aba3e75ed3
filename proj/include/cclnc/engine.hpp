#pragma once
// CCLNC(C) goal solving: constrained lazy narrowing over M ⊕ H ⊕ FD ⊕ R with
// bridges, projections and solver invocations, explored depth-first.

#include "cclnc/fd.hpp"
#include "cclnc/kernel.hpp"
#include "cclnc/program.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace cclnc {

struct EngineError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class TraceLevel { Off, Rules, Full };

struct Config {
    bool projections = true;
    std::optional<LabelStrategy> labeling;  // unset: what each labeling atom asks for
    std::size_t max_answers = 1;            // 0 = all
    Rat epsilon = 0;
    TraceLevel trace = TraceLevel::Off;
    std::uint64_t seed = 0;
    std::size_t max_steps = 50000000;
    bool show_totality = false;
};

// e -> t
struct Production {
    ExprP lhs, rhs;
};

struct Goal {
    std::set<VarId> U;
    std::vector<Production> P;
    std::vector<Atom> C;  // pool; arguments may still be non-patterns
    std::vector<Atom> M;
    Subst sM;
    std::vector<Atom> H;
    Subst sH;
    FDStore F;
    std::vector<Atom> R;
    Subst sR;

    // stores that may not be in solved form
    bool dirty_m = false, dirty_f = false, dirty_r = false;
    bool unsafe_h = false, opaque_dc = false;
    // labeling choice to commit when this alternative is resumed
    std::optional<std::pair<ExprP, std::int64_t>> pending_label;
    std::vector<std::string> diagnostics;
};

std::string show(const Production& p);
std::string show_goal(const Goal& g);

Goal initial_goal(const ParsedGoal& g);
std::set<VarId> pvar(const Goal& g);
std::set<VarId> odvar(const Goal& g);

struct Counters {
    std::size_t steps = 0;
    std::size_t label_choices = 0;
    std::size_t solver_calls = 0;
    std::size_t answers = 0;
};

struct TraceRecord {
    std::size_t step = 0;
    std::string rule;
    std::string selected;
    std::string detail;                // new bridges, projections, bindings
    std::array<std::size_t, 6> sizes{};  // |P| |C| |M| |H| |F| |R|
    std::string goal;                  // full level only
};
std::string format_trace(const TraceRecord& r, TraceLevel level);

struct Answer {
    std::vector<ExprP> vars;  // initial goal variables
    Subst subst;              // restricted to vars
    std::vector<Atom> m, h, f, r;
    std::vector<Production> pending;  // only for goals stuck on flexible productions
    bool unsafe_h = false, opaque_dc = false;
    std::vector<std::string> diagnostics;
};

// "{X -> 2, Y -> 2}" plus residual constraints, if any
std::string show(const Answer& a, bool show_totality = false);
std::string show_subst(const Answer& a);

struct StepOutcome {
    enum class Kind { Progress, Fail, Solved, Branch } kind = Kind::Progress;
    std::vector<Goal> alternatives;  // Branch, in exploration order
};

class Engine {
public:
    Engine(const Program& prog, const ParsedGoal& goal, Config cfg = {});
    // next answer of the depth-first search; nullopt = exhausted
    std::optional<Answer> next();
    // up to cfg.max_answers answers (0 = all)
    std::vector<Answer> solve();

    // one strategy step on g (in place unless the outcome branches)
    StepOutcome step(Goal& g);

    const Counters& counters() const { return counters_; }
    const std::vector<TraceRecord>& trace() const { return trace_; }
    void on_trace(std::function<void(const TraceRecord&)> f) { sink_ = std::move(f); }
    const Config& config() const { return cfg_; }

private:
    struct Ctx;
    void record(const Goal& g, const std::string& rule, const std::string& selected, const std::string& detail = "");
    Answer make_answer(const Goal& g) const;

    const Program& prog_;
    ParsedGoal goal_;
    Config cfg_;
    std::vector<Goal> stack_;
    Counters counters_;
    std::vector<TraceRecord> trace_;
    std::function<void(const TraceRecord&)> sink_;
};

// Convenience: parse, type and solve.
std::vector<Answer> solve_goal(const Program& prog, const std::string& goal_text, const Config& cfg,
                               Counters* counters = nullptr);

// Independent check: the answer instantiated into the initial goal holds under
// innermost evaluation of the program rules and primitive interpretation.
// Non-ground leftovers are sampled over small integer/real grids; report
// explains what was checked.
bool check_answer(const Program& prog, const ParsedGoal& initial, const Answer& answer,
                  std::string* report = nullptr);
bool check_substitution(const Program& prog, const ParsedGoal& initial, const Subst& s,
                        std::string* report = nullptr);

}  // namespace cclnc
