#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mtl/formula.hpp"
#include "mtl/structure.hpp"
#include "mtl/types.hpp"

namespace mtl {

struct CanonicalModel {
    KripkeStructure K;
    std::vector<std::vector<std::size_t>> layers;  // L_0..L_k
    std::vector<std::string> phi;

    Team layer_team(unsigned i) const;
    std::string metadata_json() const;
};

// Staged construction: L_0 has one world per valuation of phi, L_i one world
// per (valuation, subset of L_{i-1}). `constraints[j]`, when given, must hold
// at every world of L_{k-j}; worlds violating it are not built and never used
// as successors. Throws BudgetExceeded if a layer would exceed `budget` worlds.
CanonicalModel build_canonical_model(const std::vector<std::string>& phi, unsigned k,
                                     std::uint64_t budget = kDefaultBudget,
                                     const std::vector<Formula>& constraints = {});

struct Staircase {
    KripkeStructure K;
    Team team;
    unsigned k = 0;
    std::vector<std::string> phi;
    std::vector<std::string> stairs;  // s_0..s_k
    std::optional<std::string> prime;

    std::string metadata_json() const;
};

std::string stair_name(unsigned i);
inline const char* kPrimeStair = "s_prime";

Staircase build_staircase(const std::vector<std::string>& phi, unsigned k, bool with_prime,
                          std::uint64_t budget = kDefaultBudget);

// Adds a copy of a tree realizing type t below nothing (a new root) and returns
// the root index. Every created world is labeled with each of `labels`.
std::size_t realize_type(KripkeStructure& K, TypeTable& table, TypeId t, const std::string& name,
                         const std::vector<std::string>& labels);

struct ValidationResult {
    bool ok = true;
    std::string message;
};

// Checks the staircase definition directly: stairs are scopes, pairwise
// disjoint, and T_{s_i} is i-canonical with offset k-i (prime stair: k-canonical
// with offset 0).
ValidationResult validate_staircase(const KripkeStructure& K, const Team& T, const std::vector<std::string>& phi,
                                    unsigned k, const std::vector<std::string>& stairs,
                                    const std::optional<std::string>& prime = std::nullopt);

// True iff T is i-canonical with offset `offset` for the given phi.
bool is_canonical_with_offset(const KripkeStructure& K, const Team& T, const std::vector<std::string>& phi,
                              unsigned i, unsigned offset);

// Directed forest of height <= h whose roots are exactly T.
bool is_forest_rooted_at(const KripkeStructure& K, const Team& T, unsigned h);

}  // namespace mtl
