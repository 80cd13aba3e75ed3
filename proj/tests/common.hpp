#pragma once
// Small helpers shared by the unit tests.

#include "cclnc/bench.hpp"
#include "cclnc/engine.hpp"
#include "cclnc/parser.hpp"
#include "cclnc/typing.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#ifndef CCLNC_PROGRAM_DIR
#define CCLNC_PROGRAM_DIR "programs"
#endif

namespace testutil {

using namespace cclnc;

inline Program program(const std::string& text) {
    Program p = parse_program(text);
    check_program(p);
    return p;
}

inline std::string bothin_text() {
    std::ifstream in(std::string(CCLNC_PROGRAM_DIR) + "/bothin.toy");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline const Program& bothin() {
    static Program p = load_program(std::string(CCLNC_PROGRAM_DIR) + "/bothin.toy");
    return p;
}

// constraints parsed as a goal (untyped); variables keep their names
struct Parsed {
    ParsedGoal g;
    ExprP v(const std::string& name) const {
        for (const auto& x : g.vars)
            if (*x->name == name) return x;
        throw std::runtime_error("no variable " + name);
    }
    VarId id(const std::string& name) const { return v(name)->id; }
    const std::vector<Atom>& atoms() const { return g.constraints; }
    std::set<VarId> ids(const std::vector<std::string>& names) const {
        std::set<VarId> s;
        for (const auto& n : names) s.insert(id(n));
        return s;
    }
};

inline Parsed parse(const Program& p, const std::string& text, bool typed = false) {
    Parsed r{parse_goal(p, text)};
    if (typed) check_goal(p, r.g);
    return r;
}

inline std::set<std::string> names(const std::set<VarId>& ids, const Parsed& p) {
    std::set<std::string> out;
    for (const auto& x : p.g.vars)
        if (ids.count(x->id)) out.insert(*x->name);
    return out;
}

inline std::vector<std::string> shown(const std::vector<Atom>& as) {
    std::vector<std::string> out;
    for (const auto& a : as) out.push_back(show(a));
    return out;
}

inline std::vector<std::string> solve_all(const Program& p, const std::string& goal, bool proj,
                                          Counters* c = nullptr) {
    Config cfg;
    cfg.projections = proj;
    cfg.max_answers = 0;
    std::vector<std::string> out;
    for (const auto& a : solve_goal(p, goal, cfg, c)) out.push_back(show(a));
    return out;
}

}  // namespace testutil
