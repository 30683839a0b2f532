#pragma once

#include <array>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mtl/canonical.hpp"
#include "mtl/formula.hpp"
#include "mtl/structure.hpp"

namespace mtl {

struct SpecError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class StateKind { Exists, Forall, Accept, Reject };

struct Transition {
    std::string q, a, q2, a2;
    char dir = 'R';  // 'L' or 'R'
};

struct ATMSpec {
    std::vector<std::string> states;  // declaration order
    std::map<std::string, StateKind> kind;
    std::string initial;
    std::vector<std::string> alphabet;
    std::string blank;
    std::vector<Transition> delta;
    unsigned alternations = 2;
    unsigned depth = 1;
    unsigned phi_size = 0;

    // Pads r to even and rejects malformed specs (SpecError).
    void validate();
    std::vector<std::string> states_of(StateKind k) const;
};

ATMSpec load_atm_json(const std::string& text);
ATMSpec load_atm_file(const std::string& path);

// Cell contents: a tape symbol, or a (state, symbol) head cell.
struct Cell {
    std::string state;  // empty for plain tape cells
    std::string sym;
    bool head() const { return !state.empty(); }
    friend auto operator<=>(const Cell&, const Cell&) = default;
};

// Xi: symbols first (alphabet order), then state x symbol pairs.
std::vector<Cell> xi_cells(const ATMSpec& m);
std::string xi_name(const Cell& c);  // "x_<sym>" or "x_<state>_<sym>"

using Window = std::array<std::size_t, 6>;  // indices into xi_cells

// Cook-style window set, built directly from delta.
std::set<Window> legal_windows(const ATMSpec& m);
// All 2x3 blocks of successive configurations on a tape of n cells.
std::set<Window> harvested_windows(const ATMSpec& m, unsigned n);
// Successor configurations (accept/reject states repeat themselves).
std::vector<std::vector<Cell>> successor_configs(const ATMSpec& m, const std::vector<Cell>& config);

// Fixed proposition names used by the reduction.
struct ReductionNames {
    std::string t = "loc_t";
    std::string p = "loc_p";
    std::vector<std::string> stairs;  // s_0..s_k
    std::string prime = "s_prime";
    static std::string gamma(unsigned i) { return "g_" + std::to_string(i); }
    static std::string alpha(unsigned i) { return "a_" + std::to_string(i); }
};

// Builder for the formula family; everything is generated on demand and
// returned as interned formulas.
class Reduction {
public:
    Reduction(const ATMSpec& m, std::vector<std::string> phi);

    unsigned k() const { return k_; }
    const ReductionNames& names() const { return names_; }
    const std::vector<std::string>& phi() const { return phi_; }
    const std::vector<Cell>& xi() const { return xi_; }
    Formula xi_prop(const Cell& c) const;

    // |^a_q psi
    Formula bar(Formula a, const std::string& q, Formula psi) const;
    Formula prec(const std::string& q, Formula a, Formula b) const;
    Formula equiv(const std::string& q, Formula a, Formula b) const;
    Formula succ(const std::string& q, Formula a, Formula b) const;
    Formula min(const std::string& q, Formula a) const;
    Formula pair(Formula a) const;
    Formula grid(Formula a) const;
    Formula pre_tableau(Formula a) const;
    Formula approx(Formula a, Formula b) const;
    Formula tableau(Formula a) const;
    Formula copy(Formula gamma, Formula a, Formula body) const;
    Formula window(const std::array<Formula, 6>& g) const;
    Formula theta1() const;
    Formula theta2() const;
    Formula theta3() const;
    Formula legal(Formula a) const;
    Formula input(Formula a, const std::vector<std::string>& x) const;
    Formula xstate(const std::vector<std::string>& states, Formula b) const;
    Formula tail(Formula a, Formula b) const;
    Formula first_tail(Formula a, Formula b) const;
    Formula acc(Formula a) const;
    Formula rej(Formula a) const;
    Formula cont(Formula a, Formula b) const;
    Formula run(unsigned i, const std::vector<std::string>& x) const;
    Formula canon_prime() const;

    // Named component lookup for the CLI; args are scope names.
    Formula component(const std::string& name, const std::vector<std::string>& args,
                      const std::vector<std::string>& x = {}) const;

private:
    ATMSpec m_;
    std::vector<std::string> phi_;
    unsigned k_;
    ReductionNames names_;
    std::vector<Cell> xi_;
    std::set<Window> win_;
    Formula t_, p_;
    Formula g(unsigned i) const { return prop(ReductionNames::gamma(i)); }
    Formula other(const std::string& q) const;
};

// Split an input word into alphabet symbols (single characters, or
// whitespace-separated tokens when the input contains spaces).
std::vector<std::string> tokenize_input(const ATMSpec& m, const std::string& x);

struct ReduceResult {
    Formula formula;
    std::vector<std::string> scopes;      // Psi
    std::vector<std::string> tableaus;    // Psi'
};

ReduceResult reduce(const ATMSpec& m, const std::string& x);

// Location (1-based, per component) and cell symbol of a world, per the
// typeset ranks of its t- and p-successors at depth k-1.
std::pair<std::uint64_t, std::uint64_t> location_of(const KripkeStructure& K, std::size_t w,
                                                    const std::vector<std::string>& phi, unsigned k,
                                                    const ReductionNames& names = {},
                                                    std::uint64_t budget = kDefaultBudget);
Cell cell_of(const KripkeStructure& K, std::size_t w, const ATMSpec& m);

// Staircase (with prime stair) plus, for every listed scope, worlds encoding
// each location. With `run` unset every Xi symbol is realized at every
// location; otherwise exactly run[i-1][j-1] at location (i,j).
struct PretableauWitness {
    Staircase base;  // K, team, stair names
    std::map<std::string, std::vector<std::size_t>> scope_worlds;
    std::uint64_t n = 0;  // N = |P(Delta_{k-1})|
};

PretableauWitness build_pretableau_witness(const ATMSpec& m, const std::vector<std::string>& scopes,
                                           const std::optional<std::vector<std::vector<Cell>>>& run = std::nullopt,
                                           std::uint64_t budget = kDefaultBudget);

}  // namespace mtl
