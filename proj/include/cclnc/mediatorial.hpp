#pragma once
// Mediatorial solver: bridges X #== RX and antibridges, rules M1..M9.

#include "cclnc/kernel.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cclnc {

struct MBranch {
    std::vector<Atom> atoms;
    Subst sigma;
    std::vector<std::string> rules;  // rule names applied, in order
};

// M-specific: t #== s ->! b, t in Var|Z, s in Var|R, b in Var|bool
bool is_m_atom(const Atom& a);

// Empty result = failure. Branches are ordered M1 (true) before M2 (false).
std::vector<MBranch> solve_m(const std::vector<Atom>& pi, const Rat& epsilon = 0);
bool is_solved_m(const std::vector<Atom>& pi, const Rat& epsilon = 0);

// u #==^M u' : |u' - u| <= eps
bool m_equiv(const Rat& u, const Rat& u2, const Rat& epsilon = 0);
// the integer equivalent of a real, if any (nearest integer)
std::optional<Rat> m_integer_mate(const Rat& u2, const Rat& epsilon = 0);

enum class BridgeSide { Left, Right };
// Mate of v across some bridge in B mentioning v on the given side.
std::optional<ExprP> bridge_lookup(const std::vector<Atom>& B, BridgeSide side, const ExprP& v);
std::vector<Atom> bridges_of(const std::vector<Atom>& pi);

}  // namespace cclnc
