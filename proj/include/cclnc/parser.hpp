#pragma once
// Concrete syntax for programs and goals.

#include "cclnc/program.hpp"

#include <string>

namespace cclnc {

Program parse_program(const std::string& text, const std::string& file = "<program>");
ParsedGoal parse_goal(const Program& prog, const std::string& text, const std::string& file = "<goal>");

// Pretty printers; output parses back to the same program/goal.
std::string print_program(const Program& prog);
std::string print_rule(const Rule& r);
std::string print_condition(const Atom& a);

}  // namespace cclnc
