#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "mtl/formula.hpp"
#include "mtl/structure.hpp"

namespace mtl {

using BigInt = boost::multiprecision::cpp_int;

struct BudgetExceeded : std::runtime_error {
    std::string required;  // decimal count, or a description when astronomically large
    BudgetExceeded(const std::string& what, std::string req) : std::runtime_error(what), required(std::move(req)) {}
};

inline constexpr std::uint64_t kDefaultBudget = 1000000;

// exp_0(n) = n, exp_{k+1}(n) = 2^{exp_k(n)}.
BigInt exp_tower(unsigned k, const BigInt& n);
// exp*_0(n) = n, exp*_{k+1}(n) = n * 2^{exp*_k(n)}.
BigInt exp_star(unsigned k, const BigInt& n);
// |Delta_k| = exp*_k(2^|Phi|). Throws std::overflow_error if the value needs
// more than about 2^26 bits.
BigInt count_types(std::size_t num_props, unsigned k);
// Same, but nullopt as soon as the value exceeds cap (never overflows).
std::optional<std::uint64_t> count_types_capped(std::size_t num_props, unsigned k, std::uint64_t cap);

struct TypeId {
    std::uint32_t v = UINT32_MAX;
    friend bool operator==(TypeId a, TypeId b) { return a.v == b.v; }
    friend bool operator!=(TypeId a, TypeId b) { return a.v != b.v; }
};

// Per-session intern table of (Phi,k)-types. Phi is held in name order; bit i
// of a props mask is the i-th proposition.
class TypeTable {
public:
    explicit TypeTable(std::vector<std::string> phi);

    const std::vector<std::string>& phi() const { return phi_; }

    TypeId intern(unsigned depth, std::uint64_t props, std::vector<TypeId> children);
    unsigned depth(TypeId t) const;
    std::uint64_t props(TypeId t) const;
    const std::vector<TypeId>& children(TypeId t) const;  // sorted by the type order
    std::size_t size() const;

    // The orders on types and on type sets of equal depth.
    bool lt(TypeId a, TypeId b) const;
    bool set_lt(const std::vector<TypeId>& a, const std::vector<TypeId>& b) const;
    void sort_types(std::vector<TypeId>& ts) const;  // sort by lt and dedupe

    std::string render(TypeId t) const;
    std::uint64_t props_mask(const KripkeStructure& K, std::size_t w) const;

    TypeId type_of(const KripkeStructure& K, std::size_t w, unsigned k);
    // Types of all members of T, sorted by the type order.
    std::vector<TypeId> types_of_team(const KripkeStructure& K, const Team& T, unsigned k);
    // OpenMP kernel: types of each world in `worlds`, computed with `jobs`
    // threads. Result order follows `worlds`.
    std::vector<TypeId> types_of_worlds_parallel(const KripkeStructure& K, const std::vector<std::size_t>& worlds,
                                                 unsigned k, int jobs);

    // Delta_k in type order; throws BudgetExceeded when |Delta_k| > budget.
    std::vector<TypeId> enumerate(unsigned k, std::uint64_t budget = kDefaultBudget);

    Formula hintikka(TypeId t);

private:
    struct Entry {
        unsigned depth;
        std::uint64_t props;
        std::vector<TypeId> children;
    };
    struct KeyHash {
        std::size_t operator()(const std::vector<std::uint64_t>& k) const noexcept;
    };

    TypeId type_of_rec(const KripkeStructure& K, std::size_t w, unsigned k,
                       std::unordered_map<std::uint64_t, TypeId>& memo);

    std::vector<std::string> phi_;
    mutable std::shared_mutex mu_;
    std::deque<Entry> entries_;
    std::unordered_map<std::vector<std::uint64_t>, TypeId, KeyHash> index_;
    std::map<unsigned, std::vector<TypeId>> enumerated_;
    std::unordered_map<std::uint32_t, Formula> hintikka_;
};

std::vector<std::string> sorted_props(const std::vector<std::string>& names);

// Literal recursive bisimulation, independent of TypeTable.
bool bisimilar_points(const KripkeStructure& K1, std::size_t w1, const KripkeStructure& K2, std::size_t w2,
                      const std::vector<std::string>& phi, unsigned k);
bool bisimilar_teams(const KripkeStructure& K1, const Team& T1, const KripkeStructure& K2, const Team& T2,
                     const std::vector<std::string>& phi, unsigned k);

}  // namespace mtl
