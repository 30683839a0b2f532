#include "support.hpp"

#include <stdexcept>

namespace mtl::testing {

KripkeStructure random_structure(Rng& rng, std::size_t n, const std::vector<std::string>& props, double edge_p,
                                 bool acyclic) {
    std::bernoulli_distribution coin(0.5), edge(edge_p);
    KripkeStructure K;
    for (auto& p : props) K.declare(p);
    for (std::size_t i = 0; i < n; ++i) K.add_world("w" + std::to_string(i));
    for (std::size_t i = 0; i < n; ++i) {
        for (auto& p : props)
            if (coin(rng)) K.label(i, p);
        for (std::size_t j = acyclic ? i + 1 : 0; j < n; ++j)
            if (edge(rng)) K.add_edge(i, j);
    }
    return K;
}

Team random_team(Rng& rng, const KripkeStructure& K, double p) {
    std::bernoulli_distribution coin(p);
    Team T = K.empty_team();
    for (std::size_t i = 0; i < K.size(); ++i)
        if (coin(rng)) T.set(i);
    return T;
}

Team team_from_mask(const KripkeStructure& K, std::uint64_t mask) {
    Team T = K.empty_team();
    for (std::size_t i = 0; i < K.size() && i < 64; ++i)
        if ((mask >> i) & 1U) T.set(i);
    return T;
}

Team point(const KripkeStructure& K, std::size_t w) {
    Team T = K.empty_team();
    T.set(w);
    return T;
}

Formula random_classical(Rng& rng, const std::vector<std::string>& props, unsigned depth, unsigned size) {
    FormulaGen g{props, depth, false, true};
    return random_formula(rng, g, size);
}

namespace {

Formula gen(Rng& rng, const FormulaGen& g, unsigned size, unsigned depth_left, bool classical) {
    std::uniform_int_distribution<int> pick(0, 99);
    auto atom = [&]() -> Formula {
        if (g.props.empty() || pick(rng) < 15) return pick(rng) < 50 ? top() : bot();
        std::uniform_int_distribution<std::size_t> pp(0, g.props.size() - 1);
        Formula p = prop(g.props[pp(rng)]);
        return pick(rng) < 30 ? ml_neg(p) : p;
    };
    if (size <= 1) return atom();
    int r = pick(rng);
    if (!classical && r < 15) return team_neg(gen(rng, g, size - 1, depth_left, false));
    if (classical && r < 12) return ml_neg(gen(rng, g, size - 1, depth_left, true));
    if (r < 45 && depth_left > 0) {
        Formula c = gen(rng, g, size - 1, depth_left - 1, classical);
        int m = pick(rng);
        if (m < 45) return box(c);
        if (g.allow_strict && !classical && m < 65) return strict_dia(c);
        return dia(c);
    }
    if (size < 3) return atom();
    std::uniform_int_distribution<unsigned> split(1, size - 2);
    unsigned ls = split(rng);
    Formula l = gen(rng, g, ls, depth_left, classical);
    Formula rr = gen(rng, g, size - 1 - ls, depth_left, classical);
    int m = pick(rng);
    if (m < 45) return conj(l, rr);
    if (g.allow_strict && !classical && m < 65) return strict_or(l, rr);
    return lax_or(l, rr);
}

bool naive_point(const KripkeStructure& K, std::size_t w, Formula f) {
    return naive_eval(K, point(K, w), f);
}

}  // namespace

Formula random_formula(Rng& rng, const FormulaGen& g, unsigned size) {
    return gen(rng, g, std::max(1U, size), g.max_depth, g.classical_only);
}

bool naive_eval(const KripkeStructure& K, const Team& T, Formula f) {
    switch (f.kind()) {
    case Kind::Top: return true;
    case Kind::Prop: return T.subset_of(K.valuation(f.name()));
    case Kind::MLNeg: {
        bool ok = true;
        T.for_each([&](std::size_t w) { ok = ok && !naive_point(K, w, f.child()); });
        return ok;
    }
    case Kind::TeamNeg: return !naive_eval(K, T, f.child());
    case Kind::And: return naive_eval(K, T, f.left()) && naive_eval(K, T, f.right());
    case Kind::LaxOr:
    case Kind::StrictOr: {
        // Each member goes left, right, or (lax only) both.
        std::vector<std::size_t> ws = T.members();
        const unsigned choices = f.kind() == Kind::LaxOr ? 3 : 2;
        std::uint64_t total = 1;
        for (std::size_t i = 0; i < ws.size(); ++i) total *= choices;
        for (std::uint64_t c = 0; c < total; ++c) {
            Team A = K.empty_team(), B = K.empty_team();
            std::uint64_t x = c;
            for (auto w : ws) {
                unsigned d = static_cast<unsigned>(x % choices);
                x /= choices;
                if (d != 1) A.set(w);
                if (d != 0) B.set(w);
            }
            if (naive_eval(K, A, f.left()) && naive_eval(K, B, f.right())) return true;
        }
        return false;
    }
    case Kind::Box: return naive_eval(K, image(K, T), f.child());
    case Kind::Dia: {
        Team img = image(K, T);
        std::vector<std::size_t> vs = img.members();
        if (vs.size() > 20) throw std::length_error("naive diamond over too many successors");
        for (std::uint64_t c = 0; c < (std::uint64_t{1} << vs.size()); ++c) {
            Team S = K.empty_team();
            for (std::size_t i = 0; i < vs.size(); ++i)
                if ((c >> i) & 1U) S.set(vs[i]);
            bool covers = true;
            T.for_each([&](std::size_t w) {
                bool any = false;
                for (auto v : K.succ(w)) any = any || S.test(v);
                covers = covers && any;
            });
            if (covers && naive_eval(K, S, f.child())) return true;
        }
        return false;
    }
    case Kind::StrictDia: {
        std::vector<std::size_t> ws = T.members();
        std::vector<std::size_t> idx(ws.size(), 0);
        for (auto w : ws)
            if (K.succ(w).empty()) return false;
        while (true) {
            Team S = K.empty_team();
            for (std::size_t i = 0; i < ws.size(); ++i) S.set(K.succ(ws[i])[idx[i]]);
            if (naive_eval(K, S, f.child())) return true;
            std::size_t i = 0;
            while (i < ws.size() && ++idx[i] == K.succ(ws[i]).size()) idx[i++] = 0;
            if (i == ws.size()) return false;
        }
    }
    }
    throw std::logic_error("unknown kind");
}

KripkeStructure induced(const KripkeStructure& K, const Team& keep, std::vector<std::size_t>* old_to_new) {
    KripkeStructure out;
    for (auto& p : K.propositions()) out.declare(p);
    std::vector<std::size_t> map(K.size(), SIZE_MAX);
    keep.for_each([&](std::size_t w) {
        map[w] = out.add_world(K.name(w));
        for (auto& p : K.propositions())
            if (K.holds(w, p)) out.label(map[w], p);
    });
    for (auto [a, b] : K.edges())
        if (map[a] != SIZE_MAX && map[b] != SIZE_MAX) out.add_edge(map[a], map[b]);
    if (old_to_new) *old_to_new = map;
    return out;
}

}  // namespace mtl::testing
