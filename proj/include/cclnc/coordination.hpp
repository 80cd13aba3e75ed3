#pragma once
// Cooperation between FD and R: bridges, projections, domain-specificity of
// extended Herbrand atoms, and the IE/ID inferences over the M store.

#include "cclnc/kernel.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cclnc {

struct ProjectionResult {
    std::vector<Atom> new_bridges;
    std::vector<Atom> projected;
};

// B is the current bridge set; new variables are fresh.
std::vector<Atom> bridges_fd_to_r(const Atom& pi, const std::vector<Atom>& B);
std::vector<Atom> proj_fd_to_r(const Atom& pi, const std::vector<Atom>& B);
std::vector<Atom> bridges_r_to_fd(const Atom& pi, const std::vector<Atom>& B);
std::vector<Atom> proj_r_to_fd(const Atom& pi, const std::vector<Atom>& B);
// bridges first, then projection against B ∪ bridges
ProjectionResult fd_to_r(const Atom& pi, const std::vector<Atom>& B);
ProjectionResult r_to_fd(const Atom& pi, const std::vector<Atom>& B);

enum class Specific { FD, R, Neither };
const char* show(Specific s);

// for t1 == t2 / t1 /= t2 with sides in Var ∪ numeric constants
Specific infer_specific(const std::vector<Atom>& M, const Atom& pi);

bool is_proper_fd(const Atom& a);  // FD primitives (not ==)
bool is_proper_r(const Atom& a);   // R primitives (not ==)
bool is_extended_herbrand(const Atom& a);

struct MInference {
    std::string rule;         // "IE" or "ID"
    std::size_t drop = 0;     // index of the M atom removed
    std::optional<Atom> to_f;
    std::optional<Atom> to_r;
};
std::optional<MInference> ie_rule(const std::vector<Atom>& M);
std::optional<MInference> id_rule(const std::vector<Atom>& M, const Rat& epsilon = 0);

}  // namespace cclnc
