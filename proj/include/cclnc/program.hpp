#pragma once
// Program representation shared by parser, typing and engine.

#include "cclnc/kernel.hpp"

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace cclnc {

struct SourceLoc {
    int line = 0;
    int col = 0;
};

class SyntaxError : public std::runtime_error {
public:
    SyntaxError(std::string file, SourceLoc loc, const std::string& msg)
        : std::runtime_error(file + ":" + std::to_string(loc.line) + ":" + std::to_string(loc.col) + ": " + msg),
          file_(std::move(file)), loc_(loc), msg_(msg) {}
    SourceLoc loc() const { return loc_; }
    const std::string& message() const { return msg_; }

private:
    std::string file_;
    SourceLoc loc_;
    std::string msg_;
};

// Types: variables and constructed types. Base types are nullary constructions
// "int", "real", "bool"; functions are "->" with two arguments.
struct Type;
using TypeP = std::shared_ptr<const Type>;
struct Type {
    enum class Kind : std::uint8_t { Var, Con } kind = Kind::Con;
    std::string name;  // type-variable name or constructor name
    int id = -1;       // inference variable id (-1 for named variables)
    bool numeric = false;  // inference variable restricted to int|real
    std::vector<TypeP> args;
};

TypeP tcon(const std::string& name, std::vector<TypeP> args = {});
TypeP tvar(const std::string& name);
TypeP tfun(TypeP a, TypeP b);
TypeP tfun(const std::vector<TypeP>& as, TypeP res);
TypeP t_int();
TypeP t_real();
TypeP t_bool();
std::string show(const TypeP& t);
std::string show_atomic(const TypeP& t);  // parenthesized unless atomic

struct ConDecl {
    std::string name;
    std::vector<TypeP> args;
};

struct DataDecl {
    std::string name;
    std::vector<std::string> params;
    std::vector<ConDecl> cons;
    bool builtin = false;
};

struct AliasDecl {
    std::string name;
    std::vector<std::string> params;
    TypeP body;
};

struct ConInfo {
    std::string name;
    int arity = 0;
    std::string datatype;
    std::vector<std::string> params;
    std::vector<TypeP> args;
};

// f t1..tn = rhs <== cond
struct Rule {
    std::string fun;
    std::vector<ExprP> lhs;
    ExprP rhs;
    std::vector<Atom> cond;  // atoms whose arguments are arbitrary expressions
    SourceLoc loc;
};

struct FunDef {
    std::string name;
    int arity = 0;
    TypeP declared;   // as written (may be null)
    TypeP principal;  // after type checking: alias-expanded declared or inferred type
    SourceLoc decl_loc;
    std::vector<Rule> rules;
};

struct Program {
    std::string file = "<program>";
    std::vector<DataDecl> datas;
    std::vector<AliasDecl> aliases;
    std::map<std::string, ConInfo> constructors;
    std::vector<std::string> fun_order;
    std::map<std::string, FunDef> funs;

    Program();  // registers builtin datatypes (list, labelType)
    const FunDef* fun(const std::string& name) const;
    const ConInfo* con(const std::string& name) const;
    const DataDecl* data(const std::string& name) const;
    const AliasDecl* alias(const std::string& name) const;
    // other constructors of c's datatype, as symbols
    std::vector<ExprP> sibling_constructors(const ExprP& c) const;
    ExprP fun_sym(const std::string& name) const;
    ExprP con_sym(const std::string& name) const;

private:
    mutable std::map<std::string, ConInfo> tuples_;  // tupN, created on demand
};

struct ParsedGoal {
    std::string text;
    std::vector<Atom> constraints;  // pool, in textual order
    std::vector<ExprP> vars;        // goal variables in order of first appearance
};

}  // namespace cclnc
