#pragma once
// Extensible Herbrand solver: the store transformations H1..H13.

#include "cclnc/kernel.hpp"
#include "cclnc/program.hpp"

#include <array>
#include <set>
#include <string>
#include <vector>

namespace cclnc {

struct HFlags {
    bool opaque_decomposition_used = false;
    bool h13_used = false;
    bool unsafe() const { return opaque_decomposition_used || h13_used; }
};

struct HStore {
    std::vector<Atom> atoms;
    Subst sigma;
    HFlags flags;
};

struct HSuccessor {
    bool fail = false;
    std::string rule;  // "H1".."H13", "H3c" (clash), "H11a"/"H11b"
    HStore store;
};

// One step on the leftmost atom some rule applies to; all successors of every
// applicable rule. Empty result means the store is irreducible.
std::vector<HSuccessor> h_step(const Program& prog, const HStore& s, const std::set<VarId>& chi);

// Rules applicable to a single atom (names only).
std::vector<std::string> h_applicable(const Program& prog, const Atom& a, const std::set<VarId>& chi);

struct HSolveResult {
    std::vector<HStore> stores;  // irreducible, non-failed stores
    std::size_t steps = 0;
    HFlags flags;  // union over all branches, failed ones included
};

HSolveResult solve_h(const Program& prog, const std::vector<Atom>& pi, const std::set<VarId>& chi,
                     std::size_t step_limit = 1000000);
bool is_solved_h(const Program& prog, const std::vector<Atom>& pi, const std::set<VarId>& chi);

// (P1..P5) progress measure
std::array<long, 5> h_measure(const Program& prog, const std::vector<Atom>& pi, const std::set<VarId>& chi);

// Extended Herbrand atom: (==) t s ->! r with pattern arguments.
bool is_herbrand_atom(const Atom& a);
// Critical variables var(Π) \ odvar(Π).
std::set<VarId> cvar(const std::vector<Atom>& pi);

}  // namespace cclnc
