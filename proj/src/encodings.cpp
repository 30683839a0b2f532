#include "mtl/encodings.hpp"

#include <set>

namespace mtl {

namespace {

std::vector<Formula> props(const std::vector<std::string>& phi) {
    std::vector<Formula> out;
    for (auto& p : phi) out.push_back(prop(p));
    return out;
}

std::vector<std::string> sorted(const std::vector<std::string>& phi) {
    PropSet s(phi.begin(), phi.end());
    return {s.begin(), s.end()};
}

}  // namespace

void require_fresh(const std::vector<std::string>& phi, const std::vector<std::string>& names) {
    std::set<std::string> seen;
    std::set<std::string> base(phi.begin(), phi.end());
    for (auto& n : names) {
        if (!seen.insert(n).second) throw NameClashError("scope name '" + n + "' used twice");
        if (base.count(n)) throw NameClashError("scope name '" + n + "' clashes with a proposition of Phi");
    }
}

Formula gen_quantifier(Quantifier q, Formula a, Formula body) {
    switch (q) {
    case Quantifier::ExistsSub: return lax_or(a, body);
    case Quantifier::ForallSub: return team_neg(lax_or(a, team_neg(body)));
    case Quantifier::ExistsOne: {
        Formula e = exists_point(a);
        return lax_or(a, conj(e, forall_sub(a, team_impl(e, body))));
    }
    case Quantifier::ForallOne: return team_neg(exists_one(a, team_neg(body)));
    }
    throw std::logic_error("unknown quantifier");
}

Formula gen_max(const std::vector<std::string>& phi, unsigned i) {
    std::vector<Formula> alts;
    for (Formula p : props(sorted(phi))) alts.push_back(ovee(dia_n(p, i), dia_n(ml_neg(p), i)));
    return lax_or(top(), conj(dia_n(top(), i), team_neg(lax_or_all(alts))));
}

Formula gen_chi0(const std::vector<std::string>& phi, Formula a, Formula b) {
    std::vector<Formula> deps;
    for (Formula p : props(sorted(phi))) deps.push_back(dep({p}));
    return hook(lax_or(a, b), conj_all(deps));
}

Formula gen_chi(const std::vector<std::string>& phi, unsigned k, Formula a, Formula b, bool starred) {
    if (!starred) {
        if (k == 0) return gen_chi0(phi, a, b);
        return conj(gen_chi0(phi, a, b), box(gen_chi(phi, k - 1, a, b, true)));
    }
    Formula ea = exists_point(a), eb = exists_point(b);
    Formula both = conj(ea, eb);
    Formula inner = conj(both, team_neg(exists_one(a, exists_one(b, gen_chi(phi, k, a, b, false)))));
    Formula rhs = conj(both, team_neg(lax_or(ovee(a, b), inner)));
    return ovee(conj(ml_neg(a), ml_neg(b)), rhs);
}

Formula gen_rho0(const std::vector<std::string>& phi, unsigned i, Formula b) { return hook(b, gen_max(phi, i)); }

Formula gen_rho(const std::vector<std::string>& phi, unsigned i, unsigned k, Formula a, Formula b) {
    if (k == 0) return gen_rho0(phi, i, b);
    Formula step = box_n(forall_one(b, box(gen_chi(phi, k - 1, a, b, true))), i);
    return forall_sub(a, exists_sub(b, conj(gen_rho0(phi, i, b), step)));
}

Formula gen_canon(const std::vector<std::string>& phi, unsigned k, const std::vector<std::string>& stairs,
                  const std::optional<std::string>& prime) {
    if (stairs.size() != k + 1) throw std::invalid_argument("canon needs exactly k+1 stair names");
    std::vector<std::string> names = stairs;
    if (prime) names.push_back(*prime);
    require_fresh(phi, names);
    std::vector<Formula> parts{gen_rho0(phi, k, prop(stairs[0]))};
    for (unsigned m = 1; m <= k; ++m) parts.push_back(gen_rho(phi, k - m, m, prop(stairs[m - 1]), prop(stairs[m])));
    if (prime) {
        if (k == 0) parts.push_back(gen_rho0(phi, 0, prop(*prime)));
        else parts.push_back(gen_rho(phi, 0, k, prop(stairs[k - 1]), prop(*prime)));
    }
    return conj_all(parts);
}

Formula gen_scopes(const std::vector<std::string>& psi, unsigned k) {
    require_fresh({}, psi);
    std::vector<Formula> parts;
    for (auto& x : psi)
        for (auto& y : psi)
            if (x != y) parts.push_back(ml_neg(conj(prop(x), prop(y))));
    for (auto& x : psi) {
        Formula px = prop(x), nx = ml_neg(px);
        for (unsigned i = 1; i <= k; ++i) parts.push_back(lax_or(conj(px, box_n(px, i)), conj(nx, box_n(nx, i))));
    }
    return conj_all(parts);
}

// The deciding proposition is the largest one on which a and b differ, so the
// agreement requirement ranges over the propositions above p.
Formula gen_zeta0(const std::vector<std::string>& phi_in, Formula a, Formula b) {
    std::vector<std::string> phi = sorted(phi_in);
    Formula ab = lax_or(a, b);
    std::vector<Formula> alts;
    for (std::size_t i = 0; i < phi.size(); ++i) {
        Formula p = prop(phi[i]);
        std::vector<Formula> parts{hook(a, ml_neg(p)), hook(b, p)};
        for (std::size_t j = i + 1; j < phi.size(); ++j) parts.push_back(hook(ab, dep({prop(phi[j])})));
        alts.push_back(conj_all(parts));
    }
    return ovee_all(alts);
}

Formula gen_zeta(const std::vector<std::string>& phi, unsigned k, Formula a, Formula b,
                 const std::vector<std::string>& stairs, bool starred) {
    if (!starred) {
        if (k == 0) return gen_zeta0(phi, a, b);
        Formula deeper = gen_zeta(phi, k - 1, a, b, stairs, true);
        return ovee(gen_zeta0(phi, a, b), conj(gen_chi0(phi, a, b), box(deeper)));
    }
    if (stairs.size() <= k) throw std::invalid_argument("zeta* needs stair names up to index k");
    Formula s = prop(stairs[k]);
    Formula ab = lax_or(a, b);
    Formula pivot_in_b = exists_one(b, gen_chi(phi, k, s, b, false));
    Formula pivot_not_in_a = team_neg(exists_one(a, gen_chi(phi, k, s, a, false)));
    Formula agree_above = conj(gen_chi(phi, k, a, b, true), ab);
    Formula rest_below = forall_one(ab, team_neg(gen_zeta(phi, k, s, ab, stairs, false)));
    return exists_one(s, conj(conj(pivot_in_b, pivot_not_in_a), lax_or(agree_above, rest_below)));
}

}  // namespace mtl
