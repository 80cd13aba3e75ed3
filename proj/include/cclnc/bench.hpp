#pragma once
// Bundled benchmark goals with their expected answers, and a runner that
// solves them and checks the answers independently.

#include "cclnc/engine.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cclnc {

struct BenchCase {
    std::string name;     // goal2, smm, ...
    std::string program;  // file name inside the program directory
    std::string goal;
    std::size_t n = 0;    // instance size for the bothIn goals, 0 otherwise
    std::size_t expected = 0;
    std::vector<std::string> expected_answers;  // displayed substitutions; empty = count only
};

// suite: core | bothin | csp | a single benchmark name. n sizes the bothIn
// goals. Throws std::invalid_argument on an unknown suite.
std::vector<BenchCase> bench_suite(const std::string& suite, std::size_t n = 100);

// d = n/2 instances of the bothIn goals
std::string goal1_text(std::size_t n);
std::string goal2_text(std::size_t n);
std::string goal3_text(std::size_t n);
std::string goal5_text();

struct BenchResult {
    BenchCase bench;
    bool projections = true;
    std::optional<LabelStrategy> labeling;
    std::vector<std::string> answers;
    bool correct = false;
    std::string why;  // first reason for !correct
    Counters counters;
    double seconds = 0;  // solving only, checks excluded
};

// Loads dir/program (std::runtime_error if missing), solves all answers and
// checks count, duplicates, expected answers and check_answer on each.
BenchResult run_bench(const BenchCase& c, const std::string& dir, bool projections,
                      std::optional<LabelStrategy> labeling);

Program load_program(const std::string& path, std::vector<std::string>* warnings = nullptr);

}  // namespace cclnc
