#include "mtl/decide.hpp"

#include <algorithm>
#include <exception>
#include <map>
#include <memory>

#include <omp.h>

#include "mtl/checker.hpp"

namespace mtl {

namespace {

void flatten_conj(Formula f, std::vector<Formula>& out) {
    if (f.kind() == Kind::And) {
        flatten_conj(f.left(), out);
        flatten_conj(f.right(), out);
    } else {
        out.push_back(f);
    }
}

Formula top_level_classical(Formula f) {
    if (f.classical()) return f;
    if (f.kind() != Kind::And) return top();
    std::vector<Formula> parts;
    for (Formula g : {top_level_classical(f.left()), top_level_classical(f.right())})
        if (g.kind() != Kind::Top) parts.push_back(g);
    return conj_all(parts);
}

void collect_atoms(Formula f, unsigned level, std::vector<std::vector<Formula>>& atoms) {
    if (f.classical()) {
        if (atoms.size() <= level) atoms.resize(level + 1);
        auto& v = atoms[level];
        if (std::find(v.begin(), v.end(), f) == v.end()) v.push_back(f);
        return;
    }
    switch (f.kind()) {
    case Kind::TeamNeg: collect_atoms(f.child(), level, atoms); break;
    case Kind::And:
    case Kind::LaxOr:
    case Kind::StrictOr:
        collect_atoms(f.left(), level, atoms);
        collect_atoms(f.right(), level, atoms);
        break;
    case Kind::Box:
    case Kind::Dia:
    case Kind::StrictDia: collect_atoms(f.child(), level + 1, atoms); break;
    default: break;
    }
}

}  // namespace

std::vector<Formula> implied_constraints(Formula phi) {
    std::vector<Formula> out{top_level_classical(phi)};
    for (unsigned j = 0; j < phi.md(); ++j) {
        std::vector<Formula> parts, next;
        flatten_conj(out.back(), parts);
        for (Formula g : parts)
            if (g.kind() == Kind::Box) next.push_back(g.child());
        out.push_back(conj_all(next));
    }
    return out;
}

Team signature_representatives(const KripkeStructure& K, const Team& T, Formula phi) {
    std::vector<std::vector<Formula>> atoms;
    collect_atoms(phi, 0, atoms);
    const unsigned levels = static_cast<unsigned>(atoms.size());
    std::vector<std::vector<Team>> sats(levels);
    {
        Checker c(K, Mode::Lax);
        for (unsigned d = 0; d < levels; ++d)
            for (Formula a : atoms[d]) sats[d].push_back(c.sat(a));
    }
    std::vector<std::map<std::vector<std::uint64_t>, std::uint64_t>> ids(levels);
    std::map<std::pair<std::size_t, unsigned>, std::uint64_t> memo;
    std::function<std::uint64_t(std::size_t, unsigned)> sig = [&](std::size_t w, unsigned d) -> std::uint64_t {
        if (auto it = memo.find({w, d}); it != memo.end()) return it->second;
        std::vector<std::uint64_t> key;
        for (auto& s : sats[d]) key.push_back(s.test(w) ? 1 : 0);
        if (d + 1 < levels) {
            std::vector<std::uint64_t> cs;
            for (auto v : K.succ(w)) cs.push_back(sig(v, d + 1));
            std::sort(cs.begin(), cs.end());
            cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
            key.push_back(UINT64_MAX);
            key.insert(key.end(), cs.begin(), cs.end());
        }
        auto [it, fresh] = ids[d].emplace(std::move(key), ids[d].size());
        memo.emplace(std::make_pair(w, d), it->second);
        return it->second;
    };
    Team reps(K.size());
    if (levels == 0) {
        // No atoms at all cannot happen for a well-formed formula; keep one world.
        T.for_each([&](std::size_t w) { if (reps.empty()) reps.set(w); });
        return reps;
    }
    std::map<std::uint64_t, std::size_t> first;
    T.for_each([&](std::size_t w) {
        if (first.emplace(sig(w, 0), w).second) reps.set(w);
    });
    return reps;
}

std::optional<Team> first_subset_with(const KripkeStructure& K, const Team& candidates, Formula phi, bool want,
                                      int jobs) {
    std::vector<std::size_t> pos = candidates.members();
    if (pos.size() > 62) throw std::length_error("subteam search over more than 62 worlds");
    const std::uint64_t total = std::uint64_t{1} << pos.size();
    auto build = [&](std::uint64_t c) {
        Team X(K.size());
        for (std::size_t i = 0; i < pos.size(); ++i)
            if ((c >> i) & 1U) X.set(pos[i]);
        return X;
    };
    const int nt = std::max(1, jobs);
    if (nt == 1) {
        Checker checker(K, Mode::Lax);
        for (std::uint64_t c = 0; c < total; ++c) {
            Team X = build(c);
            if (checker.eval(phi, X) == want) return X;
        }
        return std::nullopt;
    }
    std::vector<std::unique_ptr<Checker>> checkers(static_cast<std::size_t>(nt));
    const std::uint64_t chunk = 64 * static_cast<std::uint64_t>(nt);
    for (std::uint64_t start = 0; start < total; start += chunk) {
        const std::uint64_t end = std::min(total, start + chunk);
        std::uint64_t best = UINT64_MAX;
        std::exception_ptr err;
#pragma omp parallel for num_threads(nt) schedule(dynamic, 1) reduction(min : best)
        for (std::uint64_t c = start; c < end; ++c) {
            try {
                auto& ck = checkers[static_cast<std::size_t>(omp_get_thread_num())];
                if (!ck) ck = std::make_unique<Checker>(K, Mode::Lax);
                if (ck->eval(phi, build(c)) == want) best = std::min(best, c);
            } catch (...) {
#pragma omp critical
                err = std::current_exception();
            }
        }
        if (err) std::rethrow_exception(err);
        if (best != UINT64_MAX) return build(best);
    }
    return std::nullopt;
}

Model unfold_forest(const KripkeStructure& K, const Team& T, const std::vector<std::string>& props) {
    Model m;
    for (auto& p : props) m.K.declare(p);
    std::function<std::size_t(std::size_t, const std::string&, unsigned)> copy =
        [&](std::size_t w, const std::string& name, unsigned depth) -> std::size_t {
        if (depth > K.size()) throw std::invalid_argument("unfolding a cyclic structure");
        std::size_t nw = m.K.add_world(name);
        for (auto& p : props)
            if (K.holds(w, p)) m.K.label(nw, p);
        for (auto v : K.succ(w)) m.K.add_edge(nw, copy(v, name + "/" + K.name(v), depth + 1));
        return nw;
    };
    std::vector<std::size_t> roots;
    T.for_each([&](std::size_t w) { roots.push_back(copy(w, K.name(w), 0)); });
    m.team = m.K.empty_team();
    for (auto r : roots) m.team.set(r);
    return m;
}

DecideResult decide(Formula phi, DecideMode mode, const DecideOptions& opts) {
    if (phi.has_strict()) throw WellFormednessError("decide supports lax formulas only");
    PropSet ps = props_of(phi);
    std::vector<std::string> phi_props(ps.begin(), ps.end());
    const unsigned k = phi.md();

    std::vector<Formula> constraints;
    if (mode == DecideMode::Sat && opts.reduce) constraints = implied_constraints(phi);
    CanonicalModel cm = build_canonical_model(phi_props, k, opts.budget, constraints);

    DecideResult res;
    res.canonical_worlds = cm.K.size();

    if (!opts.reduce) {
        // Literal procedure: check top | phi (resp. ~(top | ~phi)) on all of W.
        Team W = cm.K.full_team();
        res.candidates = W.count();
        Formula goal = mode == DecideMode::Sat ? lax_or(top(), phi) : team_neg(lax_or(top(), team_neg(phi)));
        res.value = check(cm.K, W, goal);
        if (res.value && mode == DecideMode::Sat && opts.want_witness) {
            auto X = first_subset_with(cm.K, W, phi, true, opts.jobs);
            res.witness = unfold_forest(cm.K, *X, phi_props);
        }
        return res;
    }

    Team cand = signature_representatives(cm.K, cm.layer_team(k), phi);
    res.candidates = cand.count();
    if (res.candidates > 62 || (std::uint64_t{1} << res.candidates) > opts.budget * 16)
        throw BudgetExceeded("subteam search over 2^" + std::to_string(res.candidates) + " teams exceeds the budget",
                             "2^" + std::to_string(res.candidates));
    auto X = first_subset_with(cm.K, cand, phi, mode == DecideMode::Sat, opts.jobs);
    res.value = mode == DecideMode::Sat ? X.has_value() : !X.has_value();
    if (X && mode == DecideMode::Sat && opts.want_witness) res.witness = unfold_forest(cm.K, *X, phi_props);
    return res;
}

}  // namespace mtl
