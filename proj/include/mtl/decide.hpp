#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mtl/canonical.hpp"
#include "mtl/formula.hpp"
#include "mtl/structure.hpp"

namespace mtl {

enum class DecideMode { Sat, Val };

struct DecideOptions {
    std::uint64_t budget = kDefaultBudget;
    int jobs = 1;
    bool want_witness = false;
    // Prune the canonical model with the top-level classical conjuncts of the
    // formula (sat only) and quotient its top layer by the formula's own
    // atom signature. Disable to search every subteam of the full model.
    bool reduce = true;
};

struct DecideResult {
    bool value = false;
    std::optional<Model> witness;  // sat mode, when requested and satisfiable
    std::size_t canonical_worlds = 0;
    std::size_t candidates = 0;  // team members searched over
};

DecideResult decide(Formula phi, DecideMode mode, const DecideOptions& opts = {});

// Classical constraints implied at distance j from any model of phi, j = 0..md.
std::vector<Formula> implied_constraints(Formula phi);

// Lowest (lexicographic) subset X of `candidates` with eval(phi, X) == want,
// searched with `jobs` OpenMP threads. Deterministic for any job count.
std::optional<Team> first_subset_with(const KripkeStructure& K, const Team& candidates, Formula phi, bool want,
                                      int jobs);

// Forest unfolding of the part of K generated by T (K must be acyclic).
Model unfold_forest(const KripkeStructure& K, const Team& T, const std::vector<std::string>& props);

// Worlds of T with pairwise distinct signatures w.r.t. the classical atoms of
// phi at each modal level; every subteam of T agrees on phi with its image.
Team signature_representatives(const KripkeStructure& K, const Team& T, Formula phi);

}  // namespace mtl
