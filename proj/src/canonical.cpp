#include "mtl/canonical.hpp"

#include <json.hpp>

#include "mtl/checker.hpp"

namespace mtl {

using json = nlohmann::json;

Team CanonicalModel::layer_team(unsigned i) const {
    Team t(K.size());
    for (auto w : layers.at(i)) t.set(w);
    return t;
}

std::string CanonicalModel::metadata_json() const {
    json layers_j = json::array();
    for (auto& layer : layers) {
        json l = json::array();
        for (auto w : layer) l.push_back(K.name(w));
        layers_j.push_back(l);
    }
    json meta = json::object();
    meta["layers"] = layers_j;
    return meta.dump();
}

CanonicalModel build_canonical_model(const std::vector<std::string>& phi_in, unsigned k, std::uint64_t budget,
                                     const std::vector<Formula>& constraints) {
    CanonicalModel cm;
    cm.phi = sorted_props(phi_in);
    if (cm.phi.size() > 20) throw BudgetExceeded("too many propositions", "2^" + std::to_string(cm.phi.size()));
    for (auto& p : cm.phi) cm.K.declare(p);
    const std::uint64_t nval = std::uint64_t{1} << cm.phi.size();

    auto required = [&]() {
        try {
            return count_types(cm.phi.size(), k).str();
        } catch (const std::overflow_error&) {
            return "exp*_" + std::to_string(k) + "(2^" + std::to_string(cm.phi.size()) + ")";
        }
    };
    auto constraint_for = [&](unsigned layer) -> std::optional<Formula> {
        unsigned j = k - layer;
        if (j < constraints.size() && constraints[j].kind() != Kind::Top) return constraints[j];
        return std::nullopt;
    };

    std::vector<std::size_t> prev;
    for (unsigned i = 0; i <= k; ++i) {
        std::size_t m = prev.size();
        if (i > 0 && m >= 63) throw BudgetExceeded("canonical model needs " + required() + " worlds", required());
        std::uint64_t subsets = i == 0 ? 1 : (std::uint64_t{1} << m);
        if (subsets > budget / nval + 1 || nval * subsets > budget)
            throw BudgetExceeded("canonical model needs " + required() + " worlds (budget " +
                                     std::to_string(budget) + ")",
                                 required());
        std::vector<std::size_t> layer;
        for (std::uint64_t p = 0; p < nval; ++p)
            for (std::uint64_t c = 0; c < subsets; ++c) {
                std::size_t w = cm.K.add_world("L" + std::to_string(i) + "_" + std::to_string(layer.size()));
                for (std::size_t b = 0; b < cm.phi.size(); ++b)
                    if ((p >> b) & 1U) cm.K.label(w, cm.phi[b]);
                for (std::size_t b = 0; b < m; ++b)
                    if ((c >> b) & 1U) cm.K.add_edge(w, prev[b]);
                layer.push_back(w);
            }
        if (auto con = constraint_for(i)) {
            // Candidates failing the constraint stay as unreachable worlds but
            // are dropped from the layer; rebuild names to keep them dense.
            Team ok = sat_set(cm.K, *con);
            std::vector<std::size_t> kept;
            for (auto w : layer)
                if (ok.test(w)) kept.push_back(w);
            layer = std::move(kept);
        }
        cm.layers.push_back(layer);
        prev = cm.layers.back();
    }
    if (constraints.empty()) return cm;

    // Compact: rebuild with only the kept worlds.
    CanonicalModel out;
    out.phi = cm.phi;
    for (auto& p : out.phi) out.K.declare(p);
    std::vector<std::size_t> remap(cm.K.size(), SIZE_MAX);
    for (unsigned i = 0; i <= k; ++i) {
        std::vector<std::size_t> layer;
        for (auto w : cm.layers[i]) {
            std::size_t nw = out.K.add_world("L" + std::to_string(i) + "_" + std::to_string(layer.size()));
            remap[w] = nw;
            for (auto& p : out.phi)
                if (cm.K.holds(w, p)) out.K.label(nw, p);
            for (auto v : cm.K.succ(w)) out.K.add_edge(nw, remap.at(v));
            layer.push_back(nw);
        }
        out.layers.push_back(layer);
    }
    return out;
}

// ---------------------------------------------------------------- staircases

std::string stair_name(unsigned i) { return "s_" + std::to_string(i); }

std::string Staircase::metadata_json() const {
    json st = json::object();
    json names = json::array();
    for (auto& s : stairs) names.push_back(s);
    st["depth"] = k;
    st["phi"] = phi;
    st["scopes"] = names;
    if (prime) st["prime"] = *prime;
    json meta = json::object();
    meta["stairs"] = st;
    return meta.dump();
}

std::size_t realize_type(KripkeStructure& K, TypeTable& table, TypeId t, const std::string& name,
                         const std::vector<std::string>& labels) {
    std::size_t w = K.add_world(name);
    std::uint64_t p = table.props(t);
    for (std::size_t i = 0; i < table.phi().size(); ++i)
        if ((p >> i) & 1U) K.label(w, table.phi()[i]);
    for (auto& l : labels) K.label(w, l);
    std::vector<TypeId> cs = table.children(t);
    for (std::size_t c = 0; c < cs.size(); ++c) {
        std::size_t v = realize_type(K, table, cs[c], name + "." + std::to_string(c), labels);
        K.add_edge(w, v);
    }
    return w;
}

Staircase build_staircase(const std::vector<std::string>& phi, unsigned k, bool with_prime, std::uint64_t budget) {
    Staircase sc;
    sc.k = k;
    sc.phi = sorted_props(phi);
    TypeTable table(sc.phi);
    for (auto& p : sc.phi) sc.K.declare(p);
    for (unsigned i = 0; i <= k; ++i) sc.stairs.push_back(stair_name(i));
    if (with_prime) sc.prime = kPrimeStair;
    for (auto& s : sc.stairs) sc.K.declare(s);
    if (sc.prime) sc.K.declare(*sc.prime);

    std::vector<std::size_t> roots;
    auto add_stair = [&](unsigned i, const std::string& label, const std::string& prefix) {
        std::vector<TypeId> delta = table.enumerate(i, budget);
        unsigned offset = k - i;
        for (std::size_t j = 0; j < delta.size(); ++j) {
            std::string base = prefix + "_" + std::to_string(j);
            if (offset == 0) {
                roots.push_back(realize_type(sc.K, table, delta[j], base, {label}));
                continue;
            }
            std::size_t root = sc.K.add_world(base);
            sc.K.label(root, label);
            std::size_t cur = root;
            std::string path = base;
            for (unsigned step = 1; step < offset; ++step) {
                path += ".0";
                std::size_t nxt = sc.K.add_world(path);
                sc.K.label(nxt, label);
                sc.K.add_edge(cur, nxt);
                cur = nxt;
            }
            std::size_t u = realize_type(sc.K, table, delta[j], path + ".0", {label});
            sc.K.add_edge(cur, u);
            roots.push_back(root);
        }
    };
    for (unsigned i = 0; i <= k; ++i) add_stair(i, sc.stairs[i], "s" + std::to_string(i));
    if (with_prime) add_stair(k, *sc.prime, "sp");
    sc.team = sc.K.empty_team();
    for (auto r : roots) sc.team.set(r);
    return sc;
}

bool is_canonical_with_offset(const KripkeStructure& K, const Team& T, const std::vector<std::string>& phi,
                              unsigned i, unsigned offset) {
    TypeTable table(phi);
    std::vector<TypeId> delta = table.enumerate(i);
    std::vector<char> seen(table.size() + 1, 0);
    std::size_t hits = 0;
    T.for_each([&](std::size_t w) {
        Team one(K.size());
        one.set(w);
        Team img = image(K, one, offset);
        if (img.empty()) return;
        std::vector<TypeId> ts = table.types_of_team(K, img, i);
        if (ts.size() != 1) return;
        if (ts[0].v < seen.size() && !seen[ts[0].v]) {
            seen[ts[0].v] = 1;
            ++hits;
        }
    });
    return hits == delta.size();
}

ValidationResult validate_staircase(const KripkeStructure& K, const Team& T, const std::vector<std::string>& phi,
                                    unsigned k, const std::vector<std::string>& stairs,
                                    const std::optional<std::string>& prime) {
    std::vector<std::string> all = stairs;
    if (prime) all.push_back(*prime);
    if (stairs.size() != k + 1) return {false, "expected k+1 stair names"};
    for (auto& s : all)
        if (!is_scope(K, prop(s))) return {false, s + " is not a scope"};
    for (std::size_t a = 0; a < all.size(); ++a)
        for (std::size_t b = a + 1; b < all.size(); ++b)
            if (K.valuation(all[a]).intersects(K.valuation(all[b])))
                return {false, all[a] + " and " + all[b] + " overlap"};
    for (unsigned i = 0; i <= k; ++i)
        if (!is_canonical_with_offset(K, T & K.valuation(stairs[i]), phi, i, k - i))
            return {false, stairs[i] + " is not " + std::to_string(i) + "-canonical with offset " +
                               std::to_string(k - i)};
    if (prime && !is_canonical_with_offset(K, T & K.valuation(*prime), phi, k, 0))
        return {false, *prime + " is not " + std::to_string(k) + "-canonical"};
    return {};
}

bool is_forest_rooted_at(const KripkeStructure& K, const Team& T, unsigned h) {
    for (std::size_t w = 0; w < K.size(); ++w) {
        std::size_t np = K.pred(w).size();
        if (T.test(w) ? np != 0 : np != 1) return false;
    }
    // Every world reachable from T within h steps, and nothing deeper.
    Team seen = T, frontier = T;
    for (unsigned d = 0; d < h && !frontier.empty(); ++d) {
        frontier = image(K, frontier);
        seen |= frontier;
    }
    if (!frontier.empty() && !image(K, frontier).empty()) return false;
    return seen == K.full_team();
}

}  // namespace mtl
