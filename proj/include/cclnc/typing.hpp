#pragma once
// Hindley-Milner typing for programs and goals, plus transparency analysis.

#include "cclnc/program.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace cclnc {

class TypeError : public std::runtime_error {
public:
    TypeError(const std::string& file, SourceLoc loc, const std::string& msg)
        : std::runtime_error(file + ":" + std::to_string(loc.line) + ":" + std::to_string(loc.col) + ": " + msg) {}
    explicit TypeError(const std::string& msg) : std::runtime_error(msg) {}
};

using TypeEnv = std::map<VarId, TypeP>;

// Principal type of e under env (type variables renamed A, B, ...).
TypeP infer(const Program& prog, const TypeEnv& env, const ExprP& e);

// Checks every rule, fills FunDef::principal, and elaborates the program:
// digit literals used at type real become real constants, variables get
// base-type tags. Returns warnings.
std::vector<std::string> check_program(Program& prog);

// Types and elaborates a parsed goal the same way.
void check_goal(const Program& prog, ParsedGoal& goal);

// Type scheme of a symbol (constructor, defined function, primitive).
TypeP symbol_type(const Program& prog, const ExprP& sym);

// m-opacity: h :: t1 -> .. -> tm -> t is m-transparent iff tvar(t1..tm) ⊆ tvar(t).
bool is_opaque(const Program& prog, const ExprP& h, int m);
bool is_opaque_type(const TypeP& t, int m);

// Expands aliases; throws on unknown type names or arity errors.
TypeP expand_type(const Program& prog, const TypeP& t);

bool types_equal_upto_renaming(const TypeP& a, const TypeP& b);

}  // namespace cclnc
