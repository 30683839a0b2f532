#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mtl/formula.hpp"

namespace mtl {

struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Fixed-size bitset over a structure's world order.
class Team {
public:
    Team() = default;
    explicit Team(std::size_t n) : n_(n), w_((n + 63) / 64, 0) {}

    std::size_t universe() const { return n_; }
    bool test(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1U; }
    void set(std::size_t i) { w_[i >> 6] |= std::uint64_t{1} << (i & 63); }
    void reset(std::size_t i) { w_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
    std::size_t count() const;
    bool empty() const;
    bool subset_of(const Team& o) const;
    bool intersects(const Team& o) const;
    std::vector<std::size_t> members() const;
    template <class F>
    void for_each(F&& f) const {
        for (std::size_t k = 0; k < w_.size(); ++k) {
            std::uint64_t x = w_[k];
            while (x) {
                f(k * 64 + static_cast<std::size_t>(__builtin_ctzll(x)));
                x &= x - 1;
            }
        }
    }

    Team& operator|=(const Team& o);
    Team& operator&=(const Team& o);
    Team& operator-=(const Team& o);  // set difference
    friend Team operator|(Team a, const Team& b) { return a |= b; }
    friend Team operator&(Team a, const Team& b) { return a &= b; }
    friend Team operator-(Team a, const Team& b) { return a -= b; }
    Team complement() const;  // w.r.t. the universe
    friend bool operator==(const Team& a, const Team& b) { return a.n_ == b.n_ && a.w_ == b.w_; }
    friend bool operator!=(const Team& a, const Team& b) { return !(a == b); }
    // Lexicographic bitset order (highest world index most significant).
    friend bool operator<(const Team& a, const Team& b);

    std::size_t hash() const noexcept;
    const std::vector<std::uint64_t>& words() const { return w_; }

    static Team full(std::size_t n);

private:
    std::size_t n_ = 0;
    std::vector<std::uint64_t> w_;
};

struct TeamHash {
    std::size_t operator()(const Team& t) const noexcept { return t.hash(); }
};

class KripkeStructure {
public:
    KripkeStructure() = default;

    std::size_t add_world(const std::string& name);  // throws on duplicate
    void add_edge(std::size_t from, std::size_t to);
    void add_edge(const std::string& from, const std::string& to);
    void declare(const std::string& p);
    void label(std::size_t w, const std::string& p);
    void label(const std::string& w, const std::string& p);

    std::size_t size() const { return names_.size(); }
    const std::string& name(std::size_t w) const { return names_[w]; }
    std::size_t index(const std::string& name) const;  // throws if unknown
    bool has_world(const std::string& name) const { return index_.count(name) != 0; }
    const std::vector<std::size_t>& succ(std::size_t w) const { return succ_[w]; }
    const std::vector<std::size_t>& pred(std::size_t w) const { return pred_[w]; }
    bool has_edge(std::size_t a, std::size_t b) const;
    std::vector<std::pair<std::size_t, std::size_t>> edges() const;
    std::size_t edge_count() const;

    // V(p) as a team; empty for unknown propositions.
    Team valuation(const std::string& p) const;
    bool holds(std::size_t w, const std::string& p) const;
    std::vector<std::string> propositions() const;  // in name order

    Team empty_team() const { return Team(size()); }
    Team full_team() const { return Team::full(size()); }
    Team team_of(const std::vector<std::string>& names) const;

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, std::size_t> index_;
    std::vector<std::vector<std::size_t>> succ_, pred_;
    std::map<std::string, std::vector<bool>, NameLess> val_;
};

// A model file: structure plus designated team plus optional metadata.
struct Model {
    KripkeStructure K;
    Team team;
    std::string metadata_json;  // serialized "layers"/"stairs" objects, if any
};

Model load_model_json(const std::string& text);
Model load_model_file(const std::string& path);
// Sorted keys; metadata (if non-empty) must be a JSON object whose entries
// are merged under its own keys ("layers" or "stairs").
std::string model_to_json(const KripkeStructure& K, const Team& T, const std::string& metadata_json = "");

enum class Mode { Lax, Strict };

Team image(const KripkeStructure& K, const Team& T, unsigned i = 1);
Team preimage(const KripkeStructure& K, const Team& S);  // worlds with a successor in S

// T_alpha and the selection T^alpha_S.
Team restrict(const KripkeStructure& K, const Team& T, Formula alpha);
Team select(const KripkeStructure& K, const Team& T, Formula alpha, const Team& S);
bool is_scope(const KripkeStructure& K, Formula alpha);

// Lazy enumeration; the callback returns false to stop. Returns false iff stopped early.
using TeamSink = std::function<bool(const Team&)>;
using SplitSink = std::function<bool(const Team&, const Team&)>;

// Enumerate all subsets X of `free` in lexicographic order, yielding base | X.
bool for_each_subset(const Team& base, const Team& free, const TeamSink& sink);
bool successor_teams(const KripkeStructure& K, const Team& T, Mode mode, const TeamSink& sink);
bool is_strict_successor(const KripkeStructure& K, const Team& T, const Team& S);
bool splits(const Team& T, Mode mode, const SplitSink& sink);

std::vector<Team> successor_teams(const KripkeStructure& K, const Team& T, Mode mode);
std::vector<std::pair<Team, Team>> splits(const Team& T, Mode mode);

}  // namespace mtl
