#pragma once

#include <random>
#include <string>
#include <vector>

#include "mtl/formula.hpp"
#include "mtl/structure.hpp"

namespace mtl::testing {

using Rng = std::mt19937_64;

// Worlds named w0.., each edge present with probability edge_p; with
// `acyclic` edges only go from lower to higher indices.
KripkeStructure random_structure(Rng& rng, std::size_t n, const std::vector<std::string>& props, double edge_p,
                                 bool acyclic = false);
Team random_team(Rng& rng, const KripkeStructure& K, double p = 0.5);
Team team_from_mask(const KripkeStructure& K, std::uint64_t mask);

struct FormulaGen {
    std::vector<std::string> props;
    unsigned max_depth = 2;
    bool allow_strict = false;  // strict disjunction and strict diamond
    bool classical_only = false;
};
// Random formula with at most `size` core nodes.
Formula random_formula(Rng& rng, const FormulaGen& g, unsigned size);
Formula random_classical(Rng& rng, const std::vector<std::string>& props, unsigned depth, unsigned size);

// Definitional evaluator with no caching and no shortcuts: splits, successor
// teams and negations are enumerated literally. Connectives are evaluated by
// their own kind.
bool naive_eval(const KripkeStructure& K, const Team& T, Formula f);

// Single-world team.
Team point(const KripkeStructure& K, std::size_t w);

// Copy of K with worlds in `keep` only (edges among them).
KripkeStructure induced(const KripkeStructure& K, const Team& keep, std::vector<std::size_t>* old_to_new = nullptr);

}  // namespace mtl::testing
