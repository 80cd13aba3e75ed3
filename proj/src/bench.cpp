#include "cclnc/bench.hpp"

#include "cclnc/parser.hpp"
#include "cclnc/typing.hpp"

#include <chrono>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace cclnc {

namespace {

std::string point(std::size_t x, std::size_t y) {
    return "{X -> " + std::to_string(x) + ", Y -> " + std::to_string(y) + "}";
}

std::string assign(const std::vector<std::string>& vars, const std::vector<int>& vals) {
    std::string s = "{";
    for (std::size_t i = 0; i < vars.size(); ++i)
        s += (i ? ", " : "") + vars[i] + " -> " + std::to_string(vals[i]);
    return s + "}";
}

BenchCase csp(const std::string& name, const std::vector<std::string>& vars, std::size_t expected,
              const std::vector<int>& unique = {}) {
    BenchCase c;
    c.name = name;
    c.program = name + ".toy";
    c.goal = name + " [";
    for (std::size_t i = 0; i < vars.size(); ++i) c.goal += (i ? ", " : "") + vars[i];
    c.goal += "]";
    c.expected = expected;
    if (!unique.empty()) c.expected_answers = {assign(vars, unique)};
    return c;
}

std::vector<std::string> xs(int k) {
    std::vector<std::string> v;
    for (int i = 1; i <= k; ++i) v.push_back("X" + std::to_string(i));
    return v;
}

}  // namespace

std::string goal1_text(std::size_t n) {
    auto d = std::to_string(n / 2), ns = std::to_string(n);
    return "bothIn (triangle (" + d + ", " + d + ".75) " + ns + " 0.5) (square " + ns + ") (X,Y)";
}
std::string goal2_text(std::size_t n) {
    auto d = std::to_string(n / 2);
    return "bothIn (triangle (" + d + ", " + d + ".5) 2 1) (square " + std::to_string(n) + ") (X,Y)";
}
std::string goal3_text(std::size_t n) {
    auto d = std::to_string(n / 2);
    return "bothIn (triangle (" + d + ", " + d + ".5) " + std::to_string(2 * n) + " 1) (square " +
           std::to_string(n) + ") (X,Y)";
}
std::string goal5_text() { return "bothIn (parabola (2,0)) (diagonal 4) (X,Y)"; }

std::vector<BenchCase> bench_suite(const std::string& suite, std::size_t n) {
    std::vector<BenchCase> all;
    const std::size_t d = n / 2;
    all.push_back({"goal1", "bothin.toy", goal1_text(n), n, 0, {}});
    all.push_back({"goal2", "bothin.toy", goal2_text(n), n, 1, {point(d, d)}});
    BenchCase g3{"goal3", "bothin.toy", goal3_text(n), n, n + 1, {}};
    for (std::size_t x = 0; x <= n; ++x) g3.expected_answers.push_back(point(x, d));
    all.push_back(g3);
    all.push_back({"goal5", "bothin.toy", goal5_text(), 0, 2, {point(1, 1), point(4, 4)}});
    all.push_back(csp("smm", {"S", "E", "N", "D", "M", "O", "R", "Y"}, 1, {9, 5, 6, 7, 1, 0, 8, 2}));
    all.push_back(csp("donald", {"D", "O", "N", "A", "L", "G", "E", "R", "B", "T"}, 1,
                      {5, 2, 6, 4, 8, 1, 9, 7, 3, 0}));
    all.push_back(csp("wwr", {"W", "R", "O", "N", "G", "I", "H", "T"}, 7));
    all.push_back(csp("eq10", xs(7), 1, {2, 6, 10, 10, 7, 2, 10}));
    all.push_back(csp("eq20", xs(7), 1, {4, 8, 6, 1, 7, 5, 3}));
    all.push_back(csp("magic", {"A1", "A2", "A3", "A4", "A5", "A6", "A7", "A8", "A9"}, 24));
    all.push_back(csp("knapsack", {"A", "B", "C", "D"}, 3));

    if (suite == "core") return all;
    std::vector<BenchCase> out;
    for (auto& c : all) {
        bool bothin = c.program == "bothin.toy";
        if (c.name == suite || (suite == "bothin" && bothin) || (suite == "csp" && !bothin)) out.push_back(c);
    }
    if (out.empty()) throw std::invalid_argument("unknown benchmark suite: " + suite);
    return out;
}

Program load_program(const std::string& path, std::vector<std::string>* warnings) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open program file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    Program p = parse_program(ss.str(), path);
    auto w = check_program(p);
    if (warnings) *warnings = std::move(w);
    return p;
}

BenchResult run_bench(const BenchCase& c, const std::string& dir, bool projections,
                      std::optional<LabelStrategy> labeling) {
    BenchResult r;
    r.bench = c;
    r.projections = projections;
    r.labeling = labeling;
    Program prog = load_program(dir + "/" + c.program);
    ParsedGoal g = parse_goal(prog, c.goal);
    check_goal(prog, g);

    Config cfg;
    cfg.projections = projections;
    cfg.labeling = labeling;
    cfg.max_answers = 0;
    Engine e(prog, g, cfg);
    auto t0 = std::chrono::steady_clock::now();
    auto answers = e.solve();
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.counters = e.counters();

    auto fail = [&](const std::string& why) {
        if (r.why.empty()) r.why = why;
    };
    std::set<std::string> seen;
    for (const auto& a : answers) {
        std::string s = show(a);
        r.answers.push_back(s);
        if (!seen.insert(s).second) fail("duplicate answer " + s);
        std::string rep;
        if (!check_answer(prog, g, a, &rep)) fail("check failed for " + s + ": " + rep);
    }
    if (answers.size() != c.expected)
        fail("expected " + std::to_string(c.expected) + " answers, got " + std::to_string(answers.size()));
    if (!c.expected_answers.empty() &&
        seen != std::set<std::string>(c.expected_answers.begin(), c.expected_answers.end()))
        fail("answer set differs from the expected one");
    r.correct = r.why.empty();
    return r;
}

}  // namespace cclnc
