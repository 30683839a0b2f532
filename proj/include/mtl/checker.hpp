#pragma once

#include <memory>
#include <optional>
#include <unordered_map>

#include "mtl/formula.hpp"
#include "mtl/structure.hpp"

namespace mtl {

struct CheckOptions {
    // Re-evaluate every shortcut (hook, single-point quantifier) through its
    // definitional expansion and throw std::logic_error on disagreement.
    bool verify_shortcuts = false;
};

// Worlds satisfying a classical formula.
Team sat_set(const KripkeStructure& K, Formula alpha);
bool check_point(const KripkeStructure& K, std::size_t w, Formula alpha);

bool check(const KripkeStructure& K, const Team& T, Formula phi, Mode mode = Mode::Lax, CheckOptions opts = {});

// Reusable evaluator; its cache lives as long as the object. Not thread-safe.
class Checker {
public:
    Checker(const KripkeStructure& K, Mode mode, CheckOptions opts = {});
    ~Checker();
    Checker(const Checker&) = delete;
    Checker& operator=(const Checker&) = delete;

    bool eval(Formula phi, const Team& T);
    const Team& sat(Formula alpha);
    std::size_t cache_size() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// If phi is the expansion of "exists one alpha . body", return (alpha, body).
std::optional<std::pair<Formula, Formula>> match_exists_one(Formula phi);
// If phi is the expansion of "alpha hook body", return (alpha, body).
std::optional<std::pair<Formula, Formula>> match_hook(Formula phi);

}  // namespace mtl
