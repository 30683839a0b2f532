#pragma once

#include <string>
#include <vector>

#include "mtl/formula.hpp"
#include "mtl/structure.hpp"

namespace mtl {

struct LayerTranslation {
    Formula formula;                  // l_0 & phi^0
    std::vector<std::string> layers;  // l_0..l_k as actually named
    std::vector<std::string> renamed; // "old -> new" notes, empty without collisions
};

// phi^i with layer propositions `layers` (layers[i] marks depth i).
Formula layer_translate(Formula phi, unsigned i, const std::vector<std::string>& layers);

// Layering for frame classes; throws std::invalid_argument if md(phi) > k.
// Layer names default to l_0..l_k and are renamed away from Prop(phi).
LayerTranslation frame_layer_translate(Formula phi, unsigned k);

// Keeps only edges from V(layers[i]) into V(layers[i+1]).
KripkeStructure restrict_edges_by_layers(const KripkeStructure& K, const std::vector<std::string>& layers);

// Reflexive-transitive closure of the edge relation.
KripkeStructure reflexive_transitive_closure(const KripkeStructure& K);

// max_i for strict semantics: no diamonds, strict disjunctions.
Formula strict_rewrite_max(const std::vector<std::string>& phi, unsigned i);

}  // namespace mtl
