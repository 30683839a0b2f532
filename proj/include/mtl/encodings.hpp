#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mtl/formula.hpp"

namespace mtl {

struct NameClashError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

enum class Quantifier { ExistsSub, ForallSub, ExistsOne, ForallOne };

// Subteam quantifiers over a classical scope formula.
Formula gen_quantifier(Quantifier q, Formula scope, Formula body);
inline Formula exists_sub(Formula a, Formula body) { return gen_quantifier(Quantifier::ExistsSub, a, body); }
inline Formula forall_sub(Formula a, Formula body) { return gen_quantifier(Quantifier::ForallSub, a, body); }
inline Formula exists_one(Formula a, Formula body) { return gen_quantifier(Quantifier::ExistsOne, a, body); }
inline Formula forall_one(Formula a, Formula body) { return gen_quantifier(Quantifier::ForallOne, a, body); }

// max_i: the team is 0-canonical with offset i.
Formula gen_max(const std::vector<std::string>& phi, unsigned i);

// chi_0 and the mutual recursion chi_k / chi*_k for scopes a, b.
Formula gen_chi0(const std::vector<std::string>& phi, Formula a, Formula b);
Formula gen_chi(const std::vector<std::string>& phi, unsigned k, Formula a, Formula b, bool starred);

// rho^i_0(b) and rho^i_k(a, b) for k >= 1.
Formula gen_rho0(const std::vector<std::string>& phi, unsigned i, Formula b);
Formula gen_rho(const std::vector<std::string>& phi, unsigned i, unsigned k, Formula a, Formula b);

// canon_k over stairs s_0..s_k; with `prime` the variant that also forces a
// k-canonical copy of the top stair.
Formula gen_canon(const std::vector<std::string>& phi, unsigned k, const std::vector<std::string>& stairs,
                  const std::optional<std::string>& prime = std::nullopt);

// Disjointness plus edge preservation up to height k for each name in psi.
Formula gen_scopes(const std::vector<std::string>& psi, unsigned k);

// zeta_0 and the mutual recursion zeta_k / zeta*_k. zeta*_j uses stairs[j].
Formula gen_zeta0(const std::vector<std::string>& phi, Formula a, Formula b);
Formula gen_zeta(const std::vector<std::string>& phi, unsigned k, Formula a, Formula b,
                 const std::vector<std::string>& stairs, bool starred);

// Throws NameClashError if names repeat or any of them occurs in phi.
void require_fresh(const std::vector<std::string>& phi, const std::vector<std::string>& names);

}  // namespace mtl
