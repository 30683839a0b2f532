#include "mtl/structure.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mtl/checker.hpp"

namespace mtl {

using json = nlohmann::json;

// ---------------------------------------------------------------- Team

std::size_t Team::count() const {
    std::size_t c = 0;
    for (auto x : w_) c += static_cast<std::size_t>(__builtin_popcountll(x));
    return c;
}

bool Team::empty() const {
    for (auto x : w_)
        if (x) return false;
    return true;
}

bool Team::subset_of(const Team& o) const {
    for (std::size_t k = 0; k < w_.size(); ++k)
        if (w_[k] & ~o.w_[k]) return false;
    return true;
}

bool Team::intersects(const Team& o) const {
    for (std::size_t k = 0; k < w_.size(); ++k)
        if (w_[k] & o.w_[k]) return true;
    return false;
}

std::vector<std::size_t> Team::members() const {
    std::vector<std::size_t> out;
    for_each([&](std::size_t i) { out.push_back(i); });
    return out;
}

Team& Team::operator|=(const Team& o) {
    for (std::size_t k = 0; k < w_.size(); ++k) w_[k] |= o.w_[k];
    return *this;
}

Team& Team::operator&=(const Team& o) {
    for (std::size_t k = 0; k < w_.size(); ++k) w_[k] &= o.w_[k];
    return *this;
}

Team& Team::operator-=(const Team& o) {
    for (std::size_t k = 0; k < w_.size(); ++k) w_[k] &= ~o.w_[k];
    return *this;
}

Team Team::full(std::size_t n) {
    Team t(n);
    for (std::size_t k = 0; k < t.w_.size(); ++k) t.w_[k] = ~std::uint64_t{0};
    if (n % 64) t.w_.back() = (std::uint64_t{1} << (n % 64)) - 1;
    return t;
}

Team Team::complement() const { return full(n_) - *this; }

bool operator<(const Team& a, const Team& b) {
    for (std::size_t k = a.w_.size(); k-- > 0;)
        if (a.w_[k] != b.w_[k]) return a.w_[k] < b.w_[k];
    return false;
}

std::size_t Team::hash() const noexcept {
    std::size_t h = n_ * 0x9e3779b97f4a7c15ULL;
    for (auto x : w_) h = (h ^ x) * 0x100000001b3ULL + (h >> 29);
    return h;
}

// ---------------------------------------------------------------- structure

std::size_t KripkeStructure::add_world(const std::string& name) {
    if (index_.count(name)) throw FormatError("duplicate world '" + name + "'");
    std::size_t id = names_.size();
    names_.push_back(name);
    index_.emplace(name, id);
    succ_.emplace_back();
    pred_.emplace_back();
    for (auto& [p, v] : val_) v.push_back(false);
    return id;
}

void KripkeStructure::add_edge(std::size_t from, std::size_t to) {
    if (from >= size() || to >= size()) throw FormatError("edge endpoint out of range");
    auto& s = succ_[from];
    auto it = std::lower_bound(s.begin(), s.end(), to);
    if (it != s.end() && *it == to) return;
    s.insert(it, to);
    auto& p = pred_[to];
    p.insert(std::lower_bound(p.begin(), p.end(), from), from);
}

void KripkeStructure::add_edge(const std::string& from, const std::string& to) { add_edge(index(from), index(to)); }

void KripkeStructure::declare(const std::string& p) { val_[p].resize(size(), false); }

void KripkeStructure::label(std::size_t w, const std::string& p) {
    auto& v = val_[p];
    v.resize(size(), false);
    v[w] = true;
}

void KripkeStructure::label(const std::string& w, const std::string& p) { label(index(w), p); }

std::size_t KripkeStructure::index(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw FormatError("unknown world '" + name + "'");
    return it->second;
}

bool KripkeStructure::has_edge(std::size_t a, std::size_t b) const {
    return std::binary_search(succ_[a].begin(), succ_[a].end(), b);
}

std::vector<std::pair<std::size_t, std::size_t>> KripkeStructure::edges() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t a = 0; a < size(); ++a)
        for (auto b : succ_[a]) out.emplace_back(a, b);
    return out;
}

std::size_t KripkeStructure::edge_count() const {
    std::size_t c = 0;
    for (auto& s : succ_) c += s.size();
    return c;
}

Team KripkeStructure::valuation(const std::string& p) const {
    Team t(size());
    auto it = val_.find(p);
    if (it == val_.end()) return t;
    for (std::size_t w = 0; w < it->second.size(); ++w)
        if (it->second[w]) t.set(w);
    return t;
}

bool KripkeStructure::holds(std::size_t w, const std::string& p) const {
    auto it = val_.find(p);
    return it != val_.end() && w < it->second.size() && it->second[w];
}

std::vector<std::string> KripkeStructure::propositions() const {
    std::vector<std::string> out;
    for (auto& [p, v] : val_) out.push_back(p);
    return out;
}

Team KripkeStructure::team_of(const std::vector<std::string>& names) const {
    Team t(size());
    for (auto& n : names) t.set(index(n));
    return t;
}

// ---------------------------------------------------------------- JSON

namespace {

const std::vector<std::string>& string_list(const json& j, const char* what, std::vector<std::string>& buf) {
    if (!j.is_array()) throw FormatError(std::string(what) + " must be an array");
    buf.clear();
    for (auto& x : j) {
        if (!x.is_string()) throw FormatError(std::string(what) + " entries must be strings");
        buf.push_back(x.get<std::string>());
    }
    return buf;
}

}  // namespace

Model load_model_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw FormatError(std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object()) throw FormatError("model must be a JSON object");
    for (auto& [k, v] : j.items()) {
        if (k != "worlds" && k != "edges" && k != "valuation" && k != "team" && k != "layers" && k != "stairs")
            throw FormatError("unknown key '" + k + "'");
    }
    for (const char* req : {"worlds", "edges", "valuation", "team"})
        if (!j.contains(req)) throw FormatError(std::string("missing key '") + req + "'");

    Model m;
    std::vector<std::string> buf;
    for (auto& w : string_list(j["worlds"], "worlds", buf)) m.K.add_world(w);
    if (!j["edges"].is_array()) throw FormatError("edges must be an array");
    for (auto& e : j["edges"]) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string())
            throw FormatError("each edge must be a pair of world names");
        m.K.add_edge(e[0].get<std::string>(), e[1].get<std::string>());
    }
    if (!j["valuation"].is_object()) throw FormatError("valuation must be an object");
    for (auto& [p, ws] : j["valuation"].items()) {
        m.K.declare(p);
        for (auto& w : string_list(ws, "valuation", buf)) m.K.label(w, p);
    }
    m.team = m.K.team_of(string_list(j["team"], "team", buf));
    json meta = json::object();
    if (j.contains("layers")) meta["layers"] = j["layers"];
    if (j.contains("stairs")) meta["stairs"] = j["stairs"];
    if (!meta.empty()) m.metadata_json = meta.dump();
    return m;
}

Model load_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open model file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return load_model_json(ss.str());
}

std::string model_to_json(const KripkeStructure& K, const Team& T, const std::string& metadata_json) {
    json j = json::object();
    json worlds = json::array();
    for (std::size_t w = 0; w < K.size(); ++w) worlds.push_back(K.name(w));
    json edges = json::array();
    for (auto [a, b] : K.edges()) edges.push_back(json::array({K.name(a), K.name(b)}));
    json val = json::object();
    for (auto& p : K.propositions()) {
        json ws = json::array();
        K.valuation(p).for_each([&](std::size_t w) { ws.push_back(K.name(w)); });
        val[p] = ws;
    }
    json team = json::array();
    T.for_each([&](std::size_t w) { team.push_back(K.name(w)); });
    j["worlds"] = worlds;
    j["edges"] = edges;
    j["valuation"] = val;
    j["team"] = team;
    if (!metadata_json.empty()) {
        json meta = json::parse(metadata_json);
        for (auto& [k, v] : meta.items()) j[k] = v;
    }
    return j.dump(1) + "\n";
}

// ---------------------------------------------------------------- operations

Team image(const KripkeStructure& K, const Team& T, unsigned i) {
    Team cur = T;
    for (unsigned step = 0; step < i; ++step) {
        Team next(K.size());
        cur.for_each([&](std::size_t w) {
            for (auto v : K.succ(w)) next.set(v);
        });
        cur = std::move(next);
    }
    return cur;
}

Team preimage(const KripkeStructure& K, const Team& S) {
    Team out(K.size());
    S.for_each([&](std::size_t v) {
        for (auto w : K.pred(v)) out.set(w);
    });
    return out;
}

Team restrict(const KripkeStructure& K, const Team& T, Formula alpha) {
    if (!alpha.classical()) throw WellFormednessError("restriction needs a classical formula");
    return T & sat_set(K, alpha);
}

Team select(const KripkeStructure& K, const Team& T, Formula alpha, const Team& S) {
    if (!alpha.classical()) throw WellFormednessError("selection needs a classical formula");
    Team a = sat_set(K, alpha);
    return (T - a) | (T & a & S);
}

bool is_scope(const KripkeStructure& K, Formula alpha) {
    Team a = sat_set(K, alpha);
    for (auto [u, v] : K.edges())
        if (a.test(u) != a.test(v)) return false;
    return true;
}

bool for_each_subset(const Team& base, const Team& free, const TeamSink& sink) {
    std::vector<std::size_t> pos = (free - base).members();
    if (pos.size() > 62) throw std::length_error("subset enumeration over more than 62 elements");
    const std::uint64_t total = std::uint64_t{1} << pos.size();
    Team cur = base;
    for (std::uint64_t c = 0; c < total; ++c) {
        if (c) {
            // Increment: clear trailing ones, set the next bit.
            std::uint64_t changed = c ^ (c - 1);
            for (std::size_t i = 0; i < pos.size(); ++i)
                if ((changed >> i) & 1U) {
                    if ((c >> i) & 1U) cur.set(pos[i]);
                    else cur.reset(pos[i]);
                }
        }
        if (!sink(cur)) return false;
    }
    return true;
}

namespace {

bool augment(const std::vector<std::vector<std::size_t>>& adj, std::size_t u, std::vector<int>& match,
             std::vector<char>& seen) {
    for (auto v : adj[u]) {
        if (seen[v]) continue;
        seen[v] = 1;
        if (match[v] < 0 || augment(adj, static_cast<std::size_t>(match[v]), match, seen)) {
            match[v] = static_cast<int>(u);
            return true;
        }
    }
    return false;
}

}  // namespace

bool is_strict_successor(const KripkeStructure& K, const Team& T, const Team& S) {
    // S must lie in RT, every w in T needs a successor in S, and S needs a
    // matching into T so that a choice function can be surjective.
    if (!S.subset_of(image(K, T))) return false;
    if (!T.subset_of(preimage(K, S))) return false;
    std::vector<std::size_t> sv = S.members();
    std::vector<std::size_t> tv = T.members();
    std::vector<std::size_t> tindex(K.size(), 0);
    for (std::size_t i = 0; i < tv.size(); ++i) tindex[tv[i]] = i;
    std::vector<std::vector<std::size_t>> adj(sv.size());
    for (std::size_t i = 0; i < sv.size(); ++i)
        for (auto w : K.pred(sv[i]))
            if (T.test(w)) adj[i].push_back(tindex[w]);
    std::vector<int> match(tv.size(), -1);
    for (std::size_t i = 0; i < sv.size(); ++i) {
        std::vector<char> seen(tv.size(), 0);
        if (!augment(adj, i, match, seen)) return false;
    }
    return true;
}

bool successor_teams(const KripkeStructure& K, const Team& T, Mode mode, const TeamSink& sink) {
    Team rt = image(K, T);
    bool dead = false;
    T.for_each([&](std::size_t w) { dead = dead || K.succ(w).empty(); });
    if (dead) return true;
    return for_each_subset(Team(K.size()), rt, [&](const Team& S) {
        if (!T.subset_of(preimage(K, S))) return true;
        if (mode == Mode::Strict && !is_strict_successor(K, T, S)) return true;
        return sink(S);
    });
}

bool splits(const Team& T, Mode mode, const SplitSink& sink) {
    std::vector<std::size_t> pos = T.members();
    if (mode == Mode::Strict) {
        return for_each_subset(Team(T.universe()), T, [&](const Team& U) { return sink(T - U, U); });
    }
    // Lax: each member goes to S only, U only, or both.
    std::vector<std::uint8_t> digit(pos.size(), 0);
    while (true) {
        Team S(T.universe()), U(T.universe());
        for (std::size_t i = 0; i < pos.size(); ++i) {
            if (digit[i] != 1) S.set(pos[i]);
            if (digit[i] != 0) U.set(pos[i]);
        }
        if (!sink(S, U)) return false;
        std::size_t i = 0;
        while (i < pos.size() && digit[i] == 2) digit[i++] = 0;
        if (i == pos.size()) return true;
        ++digit[i];
    }
}

std::vector<Team> successor_teams(const KripkeStructure& K, const Team& T, Mode mode) {
    std::vector<Team> out;
    successor_teams(K, T, mode, [&](const Team& S) {
        out.push_back(S);
        return true;
    });
    return out;
}

std::vector<std::pair<Team, Team>> splits(const Team& T, Mode mode) {
    std::vector<std::pair<Team, Team>> out;
    splits(T, mode, [&](const Team& S, const Team& U) {
        out.emplace_back(S, U);
        return true;
    });
    return out;
}

}  // namespace mtl
