// cclnc: batch solving, REPL and the benchmark harness.
//
//   cclnc PROGRAM --goal "..." [--proj on|off] [--label naive|ff] [--answers first|all|N]
//         [--epsilon Q] [--trace off|rules|full] [--seed N] [--show-totality]
//   cclnc PROGRAM            (REPL: one goal per line on stdin, ":set KEY VALUE", ":quit")
//   cclnc bench --suite core|bothin|csp|NAME [--proj on|off|both] [--label naive|ff|both] [--n N]
//
// Exit codes: 0 ok, 1 parse/type/usage error, 2 internal error, 3 benchmark mismatch.

#include "cclnc/bench.hpp"
#include "cclnc/engine.hpp"
#include "cclnc/parser.hpp"
#include "cclnc/typing.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <unistd.h>

using namespace cclnc;

#ifndef CCLNC_PROGRAM_DIR
#define CCLNC_PROGRAM_DIR "programs"
#endif

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Rat parse_epsilon(const std::string& s) {
    Rat q;
    try {
        q = parse_rational(s);
    } catch (const std::invalid_argument&) {
        throw UsageError("bad epsilon: " + s);
    }
    if (q < 0) throw UsageError("epsilon must be >= 0");
    return q;
}

std::size_t parse_answers(const std::string& s) {
    if (s == "first") return 1;
    if (s == "all") return 0;
    try {
        std::size_t pos = 0;
        long n = std::stol(s, &pos);
        if (pos == s.size() && n > 0) return static_cast<std::size_t>(n);
    } catch (const std::exception&) {
    }
    throw UsageError("--answers expects first, all or a positive number");
}

std::optional<LabelStrategy> parse_label(const std::string& s) {
    if (s == "naive") return LabelStrategy::Naive;
    if (s == "ff") return LabelStrategy::FirstFail;
    if (s == "program") return std::nullopt;
    throw UsageError("--label expects naive or ff");
}

TraceLevel parse_trace(const std::string& s) {
    if (s == "off") return TraceLevel::Off;
    if (s == "rules") return TraceLevel::Rules;
    if (s == "full") return TraceLevel::Full;
    throw UsageError("--trace expects off, rules or full");
}

bool parse_onoff(const std::string& s) {
    if (s == "on") return true;
    if (s == "off") return false;
    throw UsageError("--proj expects on or off");
}

// Settings shared by batch mode and the REPL.
struct Settings {
    Config cfg;
    std::string label = "program", answers = "first", proj = "on", trace = "off", epsilon = "0";
    std::uint64_t seed = 0;
    bool show_totality = false;

    void apply() {
        cfg.projections = parse_onoff(proj);
        cfg.labeling = parse_label(label);
        cfg.max_answers = parse_answers(answers);
        cfg.trace = parse_trace(trace);
        cfg.epsilon = parse_epsilon(epsilon);
        cfg.seed = seed;
        cfg.show_totality = show_totality;
    }
};

bool blank(const std::string& s) { return s.find_first_not_of(" \t\r\n") == std::string::npos; }

// Solves one goal and writes answers, diagnostics and counters to out.
int solve_one(const Program& prog, const std::string& text, const Config& cfg, std::ostream& out) {
    if (blank(text)) {
        std::cerr << "error: empty goal\n";
        return 1;
    }
    ParsedGoal g;
    try {
        g = parse_goal(prog, text);
        check_goal(prog, g);
    } catch (const SyntaxError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const TypeError& e) {
        std::cerr << "type error: " << e.what() << "\n";
        return 1;
    }
    try {
        Engine e(prog, g, cfg);
        if (cfg.trace != TraceLevel::Off)
            e.on_trace([&](const TraceRecord& r) { out << format_trace(r, cfg.trace) << "\n"; });
        std::size_t count = 0;
        while (cfg.max_answers == 0 || count < cfg.max_answers) {
            auto a = e.next();
            if (!a) break;
            ++count;
            out << show(*a, cfg.show_totality) << "\n";
            for (const auto& d : a->diagnostics) out << "% " << d << "\n";
            out.flush();
        }
        if (count == 0) out << "no\n";
        const auto& c = e.counters();
        out << "% steps=" << c.steps << " label_choices=" << c.label_choices << " solver_calls=" << c.solver_calls
            << "\n";
        out.flush();
    } catch (const EngineError& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

int repl(const Program& prog, Settings st) {
    const bool tty = isatty(0);
    int rc = 0;
    std::string line;
    while (true) {
        if (tty) std::cerr << "?- " << std::flush;
        if (!std::getline(std::cin, line)) break;
        if (blank(line) || line.find_first_not_of(" \t") == line.find('%')) continue;
        if (line[line.find_first_not_of(" \t")] == ':') {
            std::istringstream is(line.substr(line.find(':') + 1));
            std::string cmd, key, value;
            is >> cmd;
            if (cmd == "quit" || cmd == "q") break;
            if (cmd != "set" || !(is >> key >> value)) {
                std::cerr << "commands: :set proj|label|answers|trace|epsilon|seed|totality VALUE, :quit\n";
                continue;
            }
            Settings next = st;
            if (key == "proj") next.proj = value;
            else if (key == "label") next.label = value;
            else if (key == "answers") next.answers = value;
            else if (key == "trace") next.trace = value;
            else if (key == "epsilon") next.epsilon = value;
            else if (key == "seed") next.seed = std::stoull(value);
            else if (key == "totality") next.show_totality = value == "on";
            else {
                std::cerr << "unknown setting: " << key << "\n";
                continue;
            }
            try {
                next.apply();
                st = next;
            } catch (const UsageError& e) {
                std::cerr << "error: " << e.what() << "\n";
            }
            continue;
        }
        rc = std::max(rc, solve_one(prog, line, st.cfg, std::cout));
    }
    return rc;
}

int bench(const std::string& suite, const std::string& proj, const std::string& label, std::size_t n,
          const std::string& dir) {
    std::vector<bool> modes;
    if (proj == "both") modes = {true, false};
    else modes = {parse_onoff(proj)};
    std::vector<std::optional<LabelStrategy>> labels;
    if (label == "both") labels = {LabelStrategy::Naive, LabelStrategy::FirstFail};
    else labels = {parse_label(label)};

    auto label_name = [](std::optional<LabelStrategy> l) {
        if (!l) return "program";
        return *l == LabelStrategy::Naive ? "naive" : "ff";
    };
    std::cout << "benchmark\tn\tlabel\tproj\tanswers\texpected\tcorrect\tlabel_choices\tsteps\tsolver_calls\tms\n";
    bool all_ok = true;
    for (const auto& c : bench_suite(suite, n)) {
        for (auto l : labels) {
            for (bool on : modes) {
                BenchResult r = run_bench(c, dir, on, l);
                all_ok = all_ok && r.correct;
                std::cout << c.name << "\t" << c.n << "\t" << label_name(l) << "\t" << (on ? "on" : "off") << "\t"
                          << r.answers.size() << "\t" << c.expected << "\t" << (r.correct ? "yes" : "NO") << "\t"
                          << r.counters.label_choices << "\t" << r.counters.steps << "\t" << r.counters.solver_calls
                          << "\t" << std::fixed << std::setprecision(1) << r.seconds * 1000 << "\n";
                if (!r.correct) std::cout << "# " << c.name << ": " << r.why << "\n";
                if (c.expected == 1 && r.answers.size() == 1) std::cout << "#   " << r.answers[0] << "\n";
                std::cout.flush();
            }
        }
    }
    return all_ok ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cclnc: constraint functional logic goal solver"};
    Settings st;
    std::string program;
    std::vector<std::string> goals;
    app.add_option("program", program, "program file (.toy)");
    app.add_option("--goal,-g", goals, "goal to solve (repeatable); without it a REPL reads stdin")
        ->allow_extra_args(false);
    app.add_option("--proj", st.proj, "projections: on|off")->capture_default_str();
    app.add_option("--label", st.label, "labeling override: naive|ff (default: as the program asks)");
    app.add_option("--answers", st.answers, "first|all|N")->capture_default_str();
    app.add_option("--epsilon", st.epsilon, "tolerance for the mediatorial solver, e.g. 0, 1/10, 0.05")
        ->capture_default_str();
    app.add_option("--trace", st.trace, "off|rules|full")->capture_default_str();
    app.add_option("--seed", st.seed, "seed (recorded in the config)");
    app.add_flag("--show-totality", st.show_totality, "show totality constraints Y == Y in answers");

    auto* b = app.add_subcommand("bench", "run bundled benchmarks");
    std::string suite, bproj = "both", blabel = "program", dir = CCLNC_PROGRAM_DIR;
    std::size_t n = 100;
    b->add_option("--suite", suite, "core|bothin|csp|goal1|goal2|goal3|goal5|smm|donald|wwr|eq10|eq20|magic|knapsack")
        ->required();
    b->add_option("--proj", bproj, "on|off|both")->capture_default_str();
    b->add_option("--label", blabel, "naive|ff|both|program")->capture_default_str();
    b->add_option("--n", n, "size of the bothIn instances")->capture_default_str();
    b->add_option("--programs", dir, "directory with the benchmark programs")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (*b) return bench(suite, bproj, blabel, n, dir);

        st.apply();
        Program prog;
        if (!program.empty()) {
            std::vector<std::string> warnings;
            prog = load_program(program, &warnings);
            for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
        } else if (goals.empty()) {
            std::cerr << "error: no program file and no goal\n";
            return 1;
        } else {
            prog = parse_program("");
            check_program(prog);
        }
        if (!app.count("--goal")) return repl(prog, st);
        int rc = 0;
        for (const auto& g : goals) rc = std::max(rc, solve_one(prog, g, st.cfg, std::cout));
        return rc;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const SyntaxError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const TypeError& e) {
        std::cerr << "type error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const EngineError& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    } catch (const std::runtime_error& e) {
        // missing files and the like
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
}
