// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "common.hpp"
#include "coordcheck.hpp"
#include "fdgen.hpp"
#include "hgen.hpp"
#include "oracles.hpp"

#include <chrono>
#include <functional>
#include <iostream>
#include <map>
#include <regex>
#include <sstream>

using namespace cclnc;
using namespace testutil;

namespace {

struct Verdict {
    bool ok = true;
    std::ostringstream detail;
    void require(bool c, const std::string& why) {
        if (!c && ok) detail << "[" << why << "] ";
        ok = ok && c;
    }
};

using Clock = std::chrono::steady_clock;
double since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string point(long x, long y) { return "{X -> " + std::to_string(x) + ", Y -> " + std::to_string(y) + "}"; }

struct Run {
    std::vector<std::string> answers;
    Counters counters;
    double seconds = 0;
    std::vector<TraceRecord> trace;
};

Run run(const Program& p, const std::string& goal, bool proj, bool trace = false) {
    ParsedGoal g = parse_goal(p, goal);
    check_goal(p, g);
    Config cfg;
    cfg.projections = proj;
    cfg.max_answers = 0;
    if (trace) cfg.trace = TraceLevel::Rules;
    Engine e(p, g, cfg);
    Run r;
    auto t = Clock::now();
    for (const auto& a : e.solve()) r.answers.push_back(show(a));
    r.seconds = since(t);
    r.counters = e.counters();
    r.trace = e.trace();
    return r;
}

std::set<std::string> as_set(const std::vector<std::string>& v) { return {v.begin(), v.end()}; }

// 1 --------------------------------------------------------------------------
void goal2_pruning(Verdict& v) {
    const Program& p = bothin();
    for (std::size_t n : {4, 100, 10000}) {
        long d = static_cast<long>(n / 2);
        Run on = run(p, goal2_text(n), true), off = run(p, goal2_text(n), false);
        std::vector<std::string> want{point(d, d)};
        v.require(on.answers == want, "n=" + std::to_string(n) + " ON answers");
        v.require(off.answers == want, "n=" + std::to_string(n) + " OFF answers");
        v.require(on.counters.label_choices <= 2, "n=" + std::to_string(n) + " ON choices");
        v.require(off.counters.label_choices >= n, "n=" + std::to_string(n) + " OFF choices");
        if (n == 10000) {
            v.require(on.seconds < 5 && off.seconds < 5, "n=10000 time");
        }
        v.detail << "n=" << n << " choices ON " << on.counters.label_choices << " OFF " << off.counters.label_choices
                 << " (" << static_cast<int>(on.seconds * 1000) << "/" << static_cast<int>(off.seconds * 1000)
                 << " ms); ";
    }
}

// 2 --------------------------------------------------------------------------
void goal1_failure(Verdict& v) {
    const Program& p = bothin();
    for (std::size_t n : {4, 100}) {
        Run on = run(p, goal1_text(n), true), off = run(p, goal1_text(n), false);
        v.require(on.answers.empty() && off.answers.empty(), "n=" + std::to_string(n) + " answers");
        v.require(on.counters.label_choices == 0, "n=" + std::to_string(n) + " ON choices");
        v.detail << "n=" << n << " choices ON " << on.counters.label_choices << " OFF " << off.counters.label_choices
                 << "; ";
    }
}

// 3 --------------------------------------------------------------------------
void goal3_solutions(Verdict& v) {
    const Program& p = bothin();
    for (std::size_t n : {4, 100}) {
        long d = static_cast<long>(n / 2);
        std::set<std::string> want;
        for (long x = 0; x <= static_cast<long>(n); ++x) want.insert(point(x, d));
        Run on = run(p, goal3_text(n), true), off = run(p, goal3_text(n), false);
        for (const Run* r : {&on, &off}) {
            v.require(r->answers.size() == n + 1, "n=" + std::to_string(n) + " count");
            v.require(as_set(r->answers) == want, "n=" + std::to_string(n) + " set");
        }
        v.require(as_set(on.answers) == as_set(off.answers), "n=" + std::to_string(n) + " ON = OFF");
        v.detail << "n=" << n << " answers " << on.answers.size() << "/" << off.answers.size() << "; ";
    }
}

// 4 --------------------------------------------------------------------------
void goal5_cooperation(Verdict& v) {
    const Program& p = bothin();
    std::set<std::string> want{point(1, 1), point(4, 4)};
    for (bool proj : {true, false}) {
        Run r = run(p, goal5_text(), proj, true);
        v.require(r.answers.size() == 2 && as_set(r.answers) == want, proj ? "ON answers" : "OFF answers");
        if (!proj) continue;
        std::size_t ie = 0, nonlinear = 0, first_label = r.trace.size(), wake = 0;
        static const std::regex product(R"(^[A-Z][A-Za-z0-9_]* \* [A-Z][A-Za-z0-9_]* ->!)");
        for (std::size_t i = 0; i < r.trace.size(); ++i) {
            const auto& t = r.trace[i];
            if (t.rule == "IE") ++ie;
            if (t.rule == "SC(iv)" && std::regex_search(t.selected, product)) ++nonlinear;
            if (t.rule == "FS" && t.detail.rfind("X = ", 0) == 0 && first_label == r.trace.size()) first_label = i;
            if (t.rule == "RS" && i > first_label) ++wake;
        }
        v.require(ie > 0, "IE bridge unification");
        v.require(nonlinear > 0, "delayed non-linear R atom");
        v.require(wake > 0, "R solving after labeling");
        v.detail << "IE steps " << ie << ", non-linear R atoms " << nonlinear << ", R wake-ups after labeling "
                 << wake << "; ";
    }
}

// 5 --------------------------------------------------------------------------
void h_example(Verdict& v) {
    Program p = program("");
    Parsed g = parse(p, "L /= X : Xs");
    ExprP L = g.v("L");
    auto display = [&](const HStore& s) {
        // fresh variables renamed X', Xs' by position in L's binding
        Subst ren;
        if (const ExprP* b = s.sigma.lookup(L->id)) {
            auto parts = args(*b);
            if (parts.size() == 2 && is_var(parts[0]) && is_var(parts[1])) {
                ren.bind(parts[0], mk_var("X'"));
                ren.bind(parts[1], mk_var("Xs'"));
            }
        }
        std::string atoms;
        for (const auto& a : s.atoms) atoms += (atoms.empty() ? "" : ", ") + show(apply_subst(a, ren));
        if (atoms.empty()) atoms = "◇";
        std::string sig;
        for (const auto& [x, b] : s.sigma.bindings())
            sig += (sig.empty() ? "" : ", ") + show(b.first) + " -> " + show(apply_subst(b.second, ren));
        return atoms + " □ {" + sig + "}";
    };
    const std::set<std::string> three = {"◇ □ {L -> []}", "X' /= X □ {L -> X' : Xs'}", "Xs' /= Xs □ {L -> X' : Xs'}"};
    std::vector<std::pair<std::string, std::set<VarId>>> chis = {
        {"{}", {}}, {"{X}", g.ids({"X"})}, {"{Xs}", g.ids({"Xs"})}, {"{X,Xs}", g.ids({"X", "Xs"})}};
    for (const auto& [name, chi] : chis) {
        auto r = solve_h(p, g.atoms(), chi);
        std::set<std::string> got;
        for (const auto& s : r.stores) got.insert(display(s));
        auto want = chi.empty() ? std::set<std::string>{"L /= X : Xs □ {}"} : three;
        v.require(r.stores.size() == want.size() && got == want, "chi=" + name);
        v.require(!r.flags.unsafe(), "chi=" + name + " safe");
        v.detail << "chi=" << name << ": " << r.stores.size() << " store(s); ";
    }
}

// 6 --------------------------------------------------------------------------
long store_size(const std::vector<Atom>& pi) {
    long s = 0;
    for (const auto& a : pi) {
        for (const auto& x : a.args) s += static_cast<long>(expr_size(x));
        if (is_var(a.result)) s += 1;
    }
    return s;
}

void h_termination(Verdict& v) {
    hgen::Gen gen(2718);
    const Program& p = hgen::prog();
    std::map<std::string, long> steps, up;
    std::string example;
    long over = 0, total = 0;
    double worst = 0;
    for (int i = 0; i < 1000; ++i) {
        auto pi = gen.store(3, 4);
        auto chi = gen.chi(pi);
        long size = store_size(pi);
        std::vector<std::pair<HStore, long>> stack{{HStore{pi, {}, {}}, 0}};
        long longest = 0;
        while (!stack.empty()) {
            auto [s, depth] = stack.back();
            stack.pop_back();
            longest = std::max(longest, depth);
            if (depth > 10 * size) break;
            auto before = h_measure(p, s.atoms, chi);
            for (auto& n : h_step(p, s, chi)) {
                ++total;
                if (n.fail) continue;
                ++steps[n.rule];
                auto after = h_measure(p, n.store.atoms, chi);
                if (!std::lexicographical_compare(after.begin(), after.end(), before.begin(), before.end())) {
                    ++up[n.rule];
                    if (example.empty()) {
                        example = n.rule + ": " + show(s.atoms) + " => " + show(n.store.atoms);
                    }
                }
                stack.push_back({n.store, depth + 1});
            }
        }
        if (longest > 10 * size) ++over;
        worst = std::max(worst, static_cast<double>(longest) / static_cast<double>(size));
    }
    long bad = 0;
    for (auto& [r, k] : up) bad += k;
    v.require(bad == 0, "measure does not decrease");
    v.require(over == 0, "derivation longer than 10*size");
    v.detail << total << " steps, " << bad << " without strict decrease (";
    for (auto& [r, k] : up) v.detail << r << ":" << k << "/" << steps[r] << " ";
    v.detail << "), longest derivation " << worst << "*size, " << over << " over the bound";
    if (!example.empty()) v.detail << "; e.g. " << example;
}

// 7 --------------------------------------------------------------------------
void soundness(Verdict& v) {
    hgen::Gen gen(4242);
    const Program& p = hgen::prog();
    int checked = 0, skipped = 0, bad_h = 0;
    while (checked < 500) {
        auto pi = gen.store(2, 2);
        auto chi = gen.chi(pi);
        bool sk = false;
        auto r = solve_h(p, pi, chi);
        int b = hgen::soundness_violations(pi, r, gen.R->id, 4, &sk);
        bad_h += b;
        if (sk) {
            ++skipped;
            continue;
        }
        ++checked;
    }
    fdgen::FdGen fg(777);
    int bad_fd = 0;
    for (int i = 0; i < 500; ++i) {
        auto pi = fg.system();
        std::set<fdgen::Point> got;
        if (!fdgen::labeled(pi, fg.vs, got) || got != fdgen::brute(pi, fg.vs)) ++bad_fd;
    }
    v.require(bad_h == 0, "H outputs not included");
    v.require(bad_fd == 0, "FD leaves differ");
    v.detail << "H: " << checked << " stores enumerated (" << skipped << " too large, skipped), " << bad_h
             << " violations; FD: 500 systems, " << bad_fd << " mismatches";
}

// 8 --------------------------------------------------------------------------
void projection_tables(Verdict& v) {
    using namespace coordcheck;
    using Fn = std::function<V(const std::string&)>;
    Fn fb = [](const std::string& t) { return unfresh(fd_bridges(t)); };
    Fn fp = [](const std::string& t) { return unfresh(fd_proj(t)); };
    Fn rb = [](const std::string& t) { return unfresh(r_bridges(t)); };
    Fn rp = [](const std::string& t) { return unfresh(r_proj(t)); };
    struct RowCase {
        Fn* f;
        std::string text;
        V want;
    };
    std::vector<RowCase> rows = {
        // FD -> R
        {&fb, "domain [X, Y] 0 4", {"X #== RX'", "Y #== RY'"}},
        {&fp, "X #== RX, Y #== RY, domain [X, Y] 0 4", {"0.0 <= RX", "RX <= 4.0", "0.0 <= RY", "RY <= 4.0"}},
        {&fb, "belongs X [1, 5, 9]", {"X #== RX'"}},
        {&fp, "X #== RX, belongs X [5, 1, 9]", {"1.0 <= RX", "RX <= 9.0"}},
        {&fp, "X #== RX, X #< 3", {"RX < 3.0"}},
        {&fp, "X #== RX, X #> 3", {"3.0 < RX"}},
        {&fp, "Y #== RY, Y #>= 2", {"2.0 <= RY"}},
        {&fb, "X #<= Y", {"X #== RX'", "Y #== RY'"}},
        {&fb, "X == 3", {"X #== RX'"}},
        {&fp, "X #== RX, X /= 3", {"RX /= 3.0"}},
        {&fp, "X #== RX, Y #== RY, X == Y", {"RX == RY"}},
        {&fb, "Y #== RY, 2 #* Y ->! C", {"C #== RC'"}},
        {&fp, "Y #== RY, 2 #* Y ->! C", {"2.0 * RY ->! RC'"}},
        {&fp, "X #== RX, Y #== RY, Z #== RZ, X #+ Y ->! Z", {"RX + RY ->! RZ"}},
        {&fb, "X #/ Y ->! Z", {}},
        // R -> FD: inequalities create no bridges; ceil and floor
        {&rb, "RX < RY", {}},
        {&rb, "RX <= 3.5", {}},
        {&rb, "RX > 4.3", {}},
        {&rb, "RY >= 1.5", {}},
        {&rp, "X #== RX, Y #== RY, RX < RY", {"X #< Y"}},
        {&rp, "X #== RX, RX < 4.3", {"X #< 5"}},
        {&rp, "X #== RX, RX <= 3.5", {"X #<= 3"}},
        {&rp, "X #== RX, RX > 4.3", {"4 #< X"}},
        {&rp, "Y #== RY, RY >= 1.5", {"2 #<= Y"}},
        {&rp, "X #== RX, RX <= -0.5", {"X #<= -1"}},
        {&rb, "2.0 == RX", {"X' #== RX"}},
        {&rp, "2.0 == RX", {"2 == X'"}},
        {&rb, "2.5 == RX", {}},
        {&rp, "X #== RX, RX /= 2.0", {"X /= 2"}},
        {&rp, "X #== RX, RX /= 2.5", {}},
        {&rb, "X #== RX, Y #== RY, RX + RY ->! RZ", {"Z' #== RZ"}},
        {&rp, "X #== RX, Y #== RY, RX + RY ->! RZ", {"X #+ Y ->! Z'"}},
        {&rp, "X #== RX, Y #== RY, RX * RY ->! RZ", {"X #* Y ->! Z'"}},
        {&rb, "X #== RX, RX + 0.5 ->! RZ", {}},
        {&rb, "X #== RX, Y #== RY, RX / RY ->! RZ", {}},
        {&rp, "X #== RX, Y #== RY, Z #== RZ, RX / RY ->! RZ", {"Y #* Z ->! X"}},
    };
    int wrong = 0;
    for (const auto& r : rows) {
        if ((*r.f)(r.text) != r.want) {
            if (wrong++ == 0) v.detail << "row " << r.text << " differs; ";
        }
    }
    v.require(wrong == 0, "table rows");
    const std::vector<std::string> fd_rows = {
        "domain [X, Y] 0 4", "belongs X [1, 5, 9]", "X #< 3", "X #== RX, Y #< X", "X #<= Y", "X == 3", "X /= 3",
        "X #== RX, Y #== RY, X == Y", "X #+ Y ->! Z", "Y #== RY, 2 #* Y ->! C", "X #* Y ->! Z", "X #/ Y ->! Z"};
    const std::vector<std::string> r_rows = {
        "X #== RX, Y #== RY, RX < RY", "X #== RX, RX < 4.3", "X #== RX, 4.3 < RX", "X #== RX, RX <= 3.5",
        "Y #== RY, 1.5 <= RY", "X #== RX, -1.5 <= RX", "2.0 == RX", "X #== RX, Y #== RY, RX == RY",
        "X #== RX, RX /= 2.0", "X #== RX, Y #== RY, RX + RY ->! RZ", "X #== RX, Y #== RY, RX * RY ->! RZ",
        "X #== RX, Y #== RY, Z #== RZ, RX / RY ->! RZ"};
    int bad = 0, sols = 0;
    for (const auto& t : fd_rows) bad += completeness_counterexamples(t, true, &sols);
    for (const auto& t : r_rows) bad += completeness_counterexamples(t, false, &sols);
    v.require(bad == 0, "completeness counterexamples");
    v.detail << rows.size() << " table rows, " << wrong << " wrong; completeness over -5..5: " << sols
             << " grid solutions, " << bad << " counterexamples";
}

// 9 --------------------------------------------------------------------------
void benchmarks(Verdict& v) {
    auto crypt = [](const std::vector<std::vector<int>>& sols, const std::vector<std::string>& names) {
        std::set<std::string> out;
        for (const auto& s : sols) out.insert(oracle::show_assignment(names, s));
        return out;
    };
    auto xs = [] {
        std::vector<std::string> n;
        for (int i = 1; i <= 7; ++i) n.push_back("X" + std::to_string(i));
        return n;
    }();
    std::map<std::string, std::set<std::string>> want;
    want["smm"] = crypt(oracle::crypt_solutions("SEND", "MORE", "MONEY", 0, "SM"), {"S", "E", "N", "D", "M", "O", "R", "Y"});
    want["donald"] = crypt(oracle::crypt_solutions("DONALD", "GERALD", "ROBERT", 0),
                           {"D", "O", "N", "A", "L", "G", "E", "R", "B", "T"});
    want["wwr"] = crypt(oracle::crypt_solutions("WRONG", "WRONG", "RIGHT", 1), {"W", "R", "O", "N", "G", "I", "H", "T"});
    for (auto [name, neq] : {std::pair<const char*, int>{"eq10", 10}, {"eq20", 20}}) {
        std::set<std::string> s;
        for (const auto& x : oracle::eq_solutions(neq, static_cast<std::uint64_t>(neq)))
            s.insert(oracle::show_assignment(xs, x));
        want[name] = s;
    }
    {
        std::set<std::string> s;
        for (const auto& m : oracle::magic_solutions())
            s.insert(oracle::show_assignment({"A1", "A2", "A3", "A4", "A5", "A6", "A7", "A8", "A9"}, m));
        want["magic"] = s;
    }
    for (const auto& [name, expect] : want) {
        for (LabelStrategy ls : {LabelStrategy::Naive, LabelStrategy::FirstFail}) {
            BenchResult r = run_bench(bench_suite(name)[0], CCLNC_PROGRAM_DIR, true, ls);
            std::string tag = name + (ls == LabelStrategy::Naive ? "/naive" : "/ff");
            v.require(r.correct, tag + " " + r.why);
            v.require(r.answers.size() == expect.size() && as_set(r.answers) == expect, tag + " vs oracle");
            v.detail << tag << " " << r.answers.size() << " (" << r.counters.label_choices << " choices); ";
        }
    }
}

// 10 -------------------------------------------------------------------------
// Linear forms of the comparisons in a constraint list, flattening results
// inlined and bridged reals renamed to their integer mates.
struct Lin {
    std::map<std::string, Rat> coef;
    Rat c = 0;
};

Lin operator+(Lin a, const Lin& b) {
    for (const auto& [k, x] : b.coef) a.coef[k] += x;
    a.c += b.c;
    return a;
}
Lin scale(Lin a, const Rat& k) {
    for (auto& [n, x] : a.coef) x *= k;
    a.c *= k;
    return a;
}

struct Linearizer {
    std::map<VarId, Atom> defs;
    std::map<VarId, std::string> rename;

    std::optional<Lin> lin(const ExprP& e) {
        if (auto n = numeric_value(e)) {
            Lin l;
            l.c = *n;
            return l;
        }
        if (is_var(e)) {
            if (auto it = defs.find(e->id); it != defs.end()) return lin_op(it->second.prim, it->second.args);
            Lin l;
            auto r = rename.find(e->id);
            l.coef[r != rename.end() ? r->second : *e->name] = 1;
            return l;
        }
        if (is_app(e) && nargs(e) == 2 && head(e)->kind == ExprKind::Sym) {
            static const std::map<std::string, Prim> ops = {{"+", Prim::RAdd},  {"-", Prim::RSub},  {"*", Prim::RMul},
                                                            {"#+", Prim::FAdd}, {"#-", Prim::FSub}, {"#*", Prim::FMul}};
            if (auto it = ops.find(*head(e)->name); it != ops.end()) return lin_op(it->second, args(e));
        }
        return std::nullopt;
    }
    std::optional<Lin> lin_op(Prim p, const std::vector<ExprP>& as) {
        auto a = lin(as[0]), b = lin(as[1]);
        if (!a || !b) return std::nullopt;
        switch (p) {
            case Prim::RAdd: case Prim::FAdd: return *a + *b;
            case Prim::RSub: case Prim::FSub: return *a + scale(*b, -1);
            case Prim::RMul: case Prim::FMul:
                if (a->coef.empty()) return scale(*b, a->c);
                if (b->coef.empty()) return scale(*a, b->c);
                return std::nullopt;
            default: return std::nullopt;
        }
    }
};

std::string show_row(const Lin& l, const std::string& op) {
    std::string s;
    for (const auto& [n, x] : l.coef)
        if (x != 0) s += (s.empty() ? "" : " + ") + x.get_str() + "*" + n;
    return s + " " + op + " " + Rat(-l.c).get_str();
}

// comparisons of `text`, as "a*X + b*Y <= c" with X, Y the FD names
std::set<std::string> linear_rows(const std::string& text, std::vector<std::string>* bad = nullptr,
                                  const std::vector<std::pair<std::string, std::string>>& pairs = {},
                                  int* bridge_mismatch = nullptr) {
    Program p = program("");
    ParsedGoal g = parse_goal(p, text);
    Linearizer L;
    for (const auto& a : g.constraints)
        if (a.is_prim() && is_var(a.result) && a.prim != Prim::Eq && a.prim != Prim::RLe && a.prim != Prim::FLe &&
            a.prim != Prim::SEq)
            L.defs.emplace(a.result->id, a);
    for (const auto& a : g.constraints)
        if (a.is_bridge() && is_var(a.args[0]) && is_var(a.args[1]) && !L.defs.count(a.args[1]->id) &&
            !L.defs.count(a.args[0]->id))
            L.rename[a.args[1]->id] = *a.args[0]->name;
    std::set<std::string> rows;
    for (const auto& a : g.constraints) {
        bool le = a.prim == Prim::RLe || a.prim == Prim::FLe;
        bool eq = a.prim == Prim::Eq && a.result_is(true);
        if (!(le || eq) || a.is_bridge()) continue;
        if (a.prim == Prim::Eq && is_var(a.args[0]) && is_var(a.args[1]) && a.args[0]->id == a.args[1]->id) continue;
        auto l = L.lin(a.args[0]), r = L.lin(a.args[1]);
        if (!l || !r) {
            if (bad) bad->push_back(show(a));
            continue;
        }
        if (a.result_is(false))  // r < l
            rows.insert(show_row(*r + scale(*l, -1), "<"));
        else
            rows.insert(show_row(*l + scale(*r, -1), eq ? "==" : "<="));
    }
    // bridges between flattening results join equal linear forms
    if (bridge_mismatch) {
        auto var_of = [&](const std::string& n) -> ExprP {
            for (const auto& x : g.vars)
                if (*x->name == n) return x;
            return nullptr;
        };
        for (const auto& [i, r] : pairs) {
            ExprP vi = var_of(i), vr = var_of(r);
            auto li = vi ? L.lin(vi) : std::nullopt, lr = vr ? L.lin(vr) : std::nullopt;
            if (!li || !lr || show_row(*li, "") != show_row(*lr, "")) ++*bridge_mismatch;
        }
    }
    return rows;
}

void derivation_replay(Verdict& v) {
    const Program& p = bothin();
    Run r = run(p, goal2_text(4), true, true);
    v.require(r.answers == std::vector<std::string>{point(2, 2)}, "answer");
    std::string rtext, ftext, btext;
    std::vector<std::pair<std::string, std::string>> sb;
    std::size_t first_pp = 0, first_sb = 0, domain_step = 0;
    auto add = [](std::string& s, const std::string& t) { s += (s.empty() ? "" : ", ") + t; };
    for (std::size_t i = 0; i < r.trace.size(); ++i) {
        const auto& t = r.trace[i];
        if (t.rule == "SC(i)") add(btext, t.selected);
        if (t.rule == "SC(iv)") add(rtext, t.selected);
        if (t.rule == "PP" && t.detail.rfind("FD: ", 0) == 0) {
            add(ftext, t.detail.substr(4));
            if (!first_pp) first_pp = i + 1;
        }
        if (t.rule == "SB") {
            add(btext, t.detail);
            auto k = t.detail.find(" #== ");
            sb.emplace_back(t.detail.substr(0, k), t.detail.substr(k + 5));
            if (!first_sb) first_sb = i + 1;
        }
        if (t.rule == "SC(iii)" && t.selected.rfind("domain", 0) == 0 && !domain_step) domain_step = i + 1;
    }
    // G8 -> G9 projects RY >= d'' before the linear rows are bridged (G9 -> G10),
    // and all of it happens before the domain constraint is solved (G10 -> G11)
    v.require(first_pp && first_sb && first_pp < first_sb, "PP of RY >= d'' precedes the bridges");
    v.require(domain_step && first_sb < domain_step, "bridges precede the domain step");

    std::vector<std::string> bad;
    int mismatch = 0;
    auto rrows = linear_rows(btext + ", " + rtext, &bad);
    auto frows = linear_rows(btext + ", " + ftext, &bad);
    linear_rows(btext + ", " + rtext + ", " + ftext, nullptr, sb, &mismatch);
    v.require(bad.empty(), "non-linear rows");
    // G10 with d = 2, d' = 2.5, d'' = 1.5, n' = 2d' + 2d = 9
    auto want_r = linear_rows("X #== RX, Y #== RY, RY >= 1.5, 2.0 * RY - 2.0 * RX ->! RB, RB <= 1.0, "
                              "2.0 * RY + 2.0 * RX ->! RC, RC <= 9.0");
    auto want_f = linear_rows("Y #>= 2, 2 #* Y #- 2 #* X ->! B, B #<= 1, 2 #* Y #+ 2 #* X ->! C, C #<= 9");
    v.require(rrows == want_r, "R rows");
    v.require(frows == want_f, "FD projections");
    v.require(mismatch == 0, "bridges join equal forms");
    v.detail << "R rows {";
    for (const auto& s : rrows) v.detail << s << "; ";
    v.detail << "} FD rows {";
    for (const auto& s : frows) v.detail << s << "; ";
    v.detail << "} " << sb.size() << " bridges, " << mismatch << " mismatched";
}

}  // namespace

int main() {
    std::vector<std::pair<std::string, std::function<void(Verdict&)>>> criteria = {
        {"goal2 correctness and pruning", goal2_pruning},
        {"goal1 failure", goal1_failure},
        {"goal3 solution set", goal3_solutions},
        {"goal5 cooperation", goal5_cooperation},
        {"H solver example shapes", h_example},
        {"H termination measure", h_termination},
        {"solver soundness oracles", soundness},
        {"projection tables and completeness", projection_tables},
        {"CSP benchmarks vs brute force", benchmarks},
        {"goal2 derivation replay", derivation_replay},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Verdict v;
        auto t = Clock::now();
        try {
            criteria[i].second(v);
        } catch (const std::exception& e) {
            v.ok = false;
            v.detail << "exception: " << e.what();
        }
        if (!v.ok) ++failed;
        std::cout << (v.ok ? "PASS" : "FAIL") << " " << (i + 1) << " " << criteria[i].first << " ("
                  << static_cast<int>(since(t) * 1000) << " ms): " << v.detail.str() << std::endl;
    }
    return failed ? 1 : 0;
}
