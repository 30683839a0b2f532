#include "mtl/translate.hpp"

#include <stdexcept>

#include "mtl/types.hpp"

namespace mtl {

Formula layer_translate(Formula f, unsigned i, const std::vector<std::string>& layers) {
    auto next = [&]() {
        if (i + 1 >= layers.size()) throw std::invalid_argument("formula deeper than the layer count");
        return prop(layers[i + 1]);
    };
    switch (f.kind()) {
    case Kind::Top:
    case Kind::Prop: return f;
    case Kind::MLNeg: return ml_neg(layer_translate(f.child(), i, layers));
    case Kind::TeamNeg: return team_neg(layer_translate(f.child(), i, layers));
    case Kind::And: return conj(layer_translate(f.left(), i, layers), layer_translate(f.right(), i, layers));
    case Kind::LaxOr: return lax_or(layer_translate(f.left(), i, layers), layer_translate(f.right(), i, layers));
    case Kind::StrictOr:
        return strict_or(layer_translate(f.left(), i, layers), layer_translate(f.right(), i, layers));
    case Kind::Dia: return dia(conj(next(), layer_translate(f.child(), i + 1, layers)));
    case Kind::StrictDia: return strict_dia(conj(next(), layer_translate(f.child(), i + 1, layers)));
    case Kind::Box: return box(hook(next(), layer_translate(f.child(), i + 1, layers)));
    }
    throw std::logic_error("unknown formula kind");
}

LayerTranslation frame_layer_translate(Formula phi, unsigned k) {
    if (phi.md() > k) throw std::invalid_argument("modal depth exceeds k");
    PropSet used = props_of(phi);
    LayerTranslation out;
    auto names_with = [&](const std::string& stem) {
        std::vector<std::string> v;
        for (unsigned i = 0; i <= k; ++i) v.push_back(stem + "_" + std::to_string(i));
        return v;
    };
    auto clash = [&](const std::vector<std::string>& v) {
        for (auto& n : v)
            if (used.count(n)) return true;
        return false;
    };
    std::string stem = "l";
    out.layers = names_with(stem);
    for (unsigned n = 1; clash(out.layers); ++n) {
        stem = "l" + std::to_string(n);
        out.layers = names_with(stem);
    }
    if (stem != "l")
        for (unsigned i = 0; i <= k; ++i)
            out.renamed.push_back("l_" + std::to_string(i) + " -> " + out.layers[i]);
    out.formula = conj(prop(out.layers[0]), layer_translate(phi, 0, out.layers));
    return out;
}

KripkeStructure restrict_edges_by_layers(const KripkeStructure& K, const std::vector<std::string>& layers) {
    KripkeStructure out;
    for (auto& p : K.propositions()) out.declare(p);
    for (std::size_t w = 0; w < K.size(); ++w) {
        out.add_world(K.name(w));
        for (auto& p : K.propositions())
            if (K.holds(w, p)) out.label(w, p);
    }
    std::vector<Team> vals;
    for (auto& l : layers) vals.push_back(K.valuation(l));
    for (auto [a, b] : K.edges())
        for (std::size_t i = 0; i + 1 < vals.size(); ++i)
            if (vals[i].test(a) && vals[i + 1].test(b)) {
                out.add_edge(a, b);
                break;
            }
    return out;
}

KripkeStructure reflexive_transitive_closure(const KripkeStructure& K) {
    const std::size_t n = K.size();
    std::vector<Team> reach(n, Team(n));
    for (std::size_t w = 0; w < n; ++w) {
        reach[w].set(w);
        for (auto v : K.succ(w)) reach[w].set(v);
    }
    for (std::size_t m = 0; m < n; ++m)
        for (std::size_t w = 0; w < n; ++w)
            if (reach[w].test(m)) reach[w] |= reach[m];
    KripkeStructure out;
    for (auto& p : K.propositions()) out.declare(p);
    for (std::size_t w = 0; w < n; ++w) {
        out.add_world(K.name(w));
        for (auto& p : K.propositions())
            if (K.holds(w, p)) out.label(w, p);
    }
    for (std::size_t w = 0; w < n; ++w) reach[w].for_each([&](std::size_t v) { out.add_edge(w, v); });
    return out;
}

namespace {

// Classical i-fold diamond written with boxes only.
Formula dia_free(Formula a, unsigned i) { return i == 0 ? a : ml_neg(box_n(ml_neg(a), i)); }

}  // namespace

Formula strict_rewrite_max(const std::vector<std::string>& phi_in, unsigned i) {
    std::vector<std::string> phi = sorted_props(phi_in);
    std::vector<Formula> alts;
    for (auto& name : phi) {
        Formula p = prop(name);
        alts.push_back(ovee(dia_free(p, i), dia_free(ml_neg(p), i)));
    }
    Formula none = team_neg(strict_or_all(alts));
    Formula body = i == 0 ? none : conj(dia_free(top(), i), none);
    return strict_or(top(), body);
}

}  // namespace mtl
