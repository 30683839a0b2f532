#pragma once

#include <cstdint>
#include <functional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mtl {

enum class Kind : std::uint8_t { Top, Prop, MLNeg, TeamNeg, And, LaxOr, StrictOr, Box, Dia, StrictDia };

struct ParseError : std::runtime_error {
    std::size_t pos;
    ParseError(const std::string& msg, std::size_t p)
        : std::runtime_error(msg + " at offset " + std::to_string(p)), pos(p) {}
};

struct WellFormednessError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Interned node. Structurally equal formulas share one node, so pointer
// equality is structural equality.
struct Node {
    Kind kind;
    std::string name;  // Prop only
    const Node* a = nullptr;
    const Node* b = nullptr;
    std::uint32_t id = 0;
    std::uint32_t md = 0;
    bool classical = false;
    bool has_strict = false;
};

class Formula {
public:
    Formula() = default;
    explicit Formula(const Node* n) : n_(n) {}

    Kind kind() const { return n_->kind; }
    const std::string& name() const { return n_->name; }
    Formula left() const { return Formula(n_->a); }
    Formula right() const { return Formula(n_->b); }
    Formula child() const { return Formula(n_->a); }
    std::uint32_t id() const { return n_->id; }
    unsigned md() const { return n_->md; }
    bool classical() const { return n_->classical; }
    bool has_strict() const { return n_->has_strict; }
    const Node* node() const { return n_; }
    bool valid() const { return n_ != nullptr; }

    friend bool operator==(Formula x, Formula y) { return x.n_ == y.n_; }
    friend bool operator!=(Formula x, Formula y) { return x.n_ != y.n_; }

private:
    const Node* n_ = nullptr;
};

// Total order on proposition names: digit runs compare numerically.
bool name_less(std::string_view x, std::string_view y);
struct NameLess {
    bool operator()(const std::string& x, const std::string& y) const { return name_less(x, y); }
};
using PropSet = std::set<std::string, NameLess>;

// Core constructors.
Formula top();
Formula prop(const std::string& name);
Formula ml_neg(Formula f);  // throws WellFormednessError on non-classical f
Formula team_neg(Formula f);
Formula conj(Formula l, Formula r);
Formula lax_or(Formula l, Formula r);
Formula strict_or(Formula l, Formula r);
Formula box(Formula f);
Formula dia(Formula f);
Formula strict_dia(Formula f);

// Abbreviations, expanded into core connectives.
Formula bot();
Formula implies(Formula a, Formula b);  // classical ->
Formula iff(Formula a, Formula b);      // classical <->
Formula ovee(Formula a, Formula b);     // Boolean disjunction of team properties
Formula team_impl(Formula a, Formula b);
Formula hook(Formula a, Formula f);
Formula exists_point(Formula a);        // E a
Formula dep(const std::vector<Formula>& args);
Formula box_n(Formula f, unsigned n);
Formula dia_n(Formula f, unsigned n);

// n-ary folds (left associated); empty conj is top, empty lax/strict or is bot.
Formula conj_all(const std::vector<Formula>& fs);
Formula lax_or_all(const std::vector<Formula>& fs);
Formula strict_or_all(const std::vector<Formula>& fs);
Formula ovee_all(const std::vector<Formula>& fs);  // empty: ~top

// Generic sugar entry point by name: "hook", "E", "ovee", "impl", "dep",
// "bot", "->", "<->".
Formula sugar_expand(const std::string& kind, const std::vector<Formula>& args);

Formula parse(std::string_view text);
std::string print_canonical(Formula f);

unsigned modal_depth(Formula f);
PropSet props_of(Formula f);
// Tree size without sharing, saturating at UINT64_MAX.
std::uint64_t tree_size(Formula f);
// Replace every occurrence of subformula `from` by `to`.
Formula substitute(Formula f, Formula from, Formula to);
// Number of occurrences of `sub` in the tree of f (saturating).
std::uint64_t count_occurrences(Formula f, Formula sub);

}  // namespace mtl

template <>
struct std::hash<mtl::Formula> {
    std::size_t operator()(mtl::Formula f) const noexcept { return std::hash<const void*>{}(f.node()); }
};
