// One PASS/FAIL line per acceptance criterion; exit status is the number of
// failures. Each criterion also has to finish inside its time limit.

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "mtl/canonical.hpp"
#include "mtl/checker.hpp"
#include "mtl/decide.hpp"
#include "mtl/encodings.hpp"
#include "mtl/reduction.hpp"
#include "mtl/translate.hpp"
#include "mtl/types.hpp"
#include "support.hpp"

using namespace mtl;
using namespace mtl::testing;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;
    std::size_t cases = 0;
    std::size_t failures = 0;
    std::string first_failure;

    void expect(bool cond, const std::string& what) {
        ++cases;
        if (cond) return;
        ++failures;
        ok = false;
        if (first_failure.empty()) first_failure = what;
    }
};

int failed = 0;

void criterion(int n, const char* title, double limit_s, const std::function<Outcome()>& body) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o.ok = false;
        o.first_failure = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool in_time = secs <= limit_s;
    bool pass = o.ok && in_time;
    if (!pass) ++failed;
    std::printf("%s %2d %s: %zu checks, %zu failed%s%s; %.2f s (limit %.0f s)%s%s\n", pass ? "PASS" : "FAIL", n, title,
                o.cases, o.failures, o.detail.empty() ? "" : "; ", o.detail.c_str(), secs, limit_s,
                in_time ? "" : " TIME EXCEEDED", o.first_failure.empty() ? "" : ("; first: " + o.first_failure).c_str());
    std::fflush(stdout);
}

std::vector<std::string> props_n(std::size_t n) {
    std::vector<std::string> v;
    for (std::size_t i = 0; i < n; ++i) v.push_back("p" + std::to_string(i));
    return v;
}

std::vector<std::string> stairs(unsigned k) {
    std::vector<std::string> s;
    for (unsigned i = 0; i <= k; ++i) s.push_back(stair_name(i));
    return s;
}

std::string data(const std::string& name) { return std::string(MTL_TEST_DATA) + "/" + name; }

// Labels every weakly connected component with one of the given scopes or
// with none, so each label is a scope and labels are pairwise disjoint.
void label_components(Rng& rng, KripkeStructure& K, const std::vector<std::string>& scopes) {
    const std::size_t n = K.size();
    std::vector<std::size_t> comp(n, SIZE_MAX);
    std::size_t c = 0;
    for (std::size_t s = 0; s < n; ++s) {
        if (comp[s] != SIZE_MAX) continue;
        std::vector<std::size_t> stack{s};
        comp[s] = c;
        while (!stack.empty()) {
            std::size_t w = stack.back();
            stack.pop_back();
            for (auto& nb : {K.succ(w), K.pred(w)})
                for (auto v : nb)
                    if (comp[v] == SIZE_MAX) {
                        comp[v] = c;
                        stack.push_back(v);
                    }
        }
        ++c;
    }
    std::uniform_int_distribution<std::size_t> pick(0, scopes.size());
    std::vector<std::size_t> choice(c);
    for (auto& x : choice) x = pick(rng);
    for (auto& s : scopes) K.declare(s);
    for (std::size_t w = 0; w < n; ++w)
        if (choice[comp[w]] < scopes.size()) K.label(w, scopes[choice[comp[w]]]);
}

// Reference order on types: valuation first (largest differing proposition
// decides), then successor sets (largest differing member decides).
bool ref_lt(const TypeTable& t, TypeId a, TypeId b);

bool ref_set_lt(const TypeTable& t, const std::vector<TypeId>& a, const std::vector<TypeId>& b) {
    std::vector<TypeId> diff;
    for (auto x : a)
        if (std::find(b.begin(), b.end(), x) == b.end()) diff.push_back(x);
    for (auto x : b)
        if (std::find(a.begin(), a.end(), x) == a.end()) diff.push_back(x);
    if (diff.empty()) return false;
    TypeId top = diff[0];
    for (auto x : diff)
        if (ref_lt(t, top, x)) top = x;
    return std::find(b.begin(), b.end(), top) != b.end();
}

bool ref_lt(const TypeTable& t, TypeId a, TypeId b) {
    if (a == b) return false;
    std::uint64_t pa = t.props(a), pb = t.props(b);
    if (pa != pb) {
        std::uint64_t d = pa ^ pb;
        unsigned hi = 63 - static_cast<unsigned>(__builtin_clzll(d));
        return (pb >> hi) & 1U;
    }
    if (t.depth(a) == 0) return false;
    return ref_set_lt(t, t.children(a), t.children(b));
}

Team with(const Team& base, std::initializer_list<std::size_t> ws) {
    Team T = base;
    for (auto w : ws) T.set(w);
    return T;
}

// Marks the types of `a` as scope "a" and of `b` as scope "b" on a copy of
// the staircase; returns the structure and the full team.
std::pair<KripkeStructure, Team> mark(const Staircase& s, TypeTable& t, const std::vector<TypeId>& a,
                                      const std::vector<TypeId>& b) {
    KripkeStructure K = s.K;
    K.declare("a");
    K.declare("b");
    std::vector<std::size_t> roots;
    for (std::size_t i = 0; i < a.size(); ++i) roots.push_back(realize_type(K, t, a[i], "ma" + std::to_string(i), {"a"}));
    for (std::size_t i = 0; i < b.size(); ++i) roots.push_back(realize_type(K, t, b[i], "mb" + std::to_string(i), {"b"}));
    Team T = K.empty_team();
    s.team.for_each([&](std::size_t w) { T.set(w); });
    for (auto r : roots) T.set(r);
    return {std::move(K), T};
}

std::vector<TypeId> subset_of(const std::vector<TypeId>& all, std::uint64_t mask) {
    std::vector<TypeId> out;
    for (std::size_t i = 0; i < all.size(); ++i)
        if ((mask >> i) & 1U) out.push_back(all[i]);
    return out;
}

// ---------------------------------------------------------------- criteria

Outcome c1_type_counts() {
    Outcome o;
    std::vector<std::pair<std::size_t, unsigned>> grid{{0, 0}, {0, 1}, {0, 2}, {0, 3}, {0, 4},
                                                       {1, 0}, {1, 1}, {1, 2}, {2, 0}, {2, 1}};
    for (auto [n, k] : grid) {
        BigInt counted = count_types(n, k);
        TypeTable t(props_n(n));
        BigInt listed = t.enumerate(k).size();
        BigInt ref = exp_star(k, BigInt(1) << n);
        std::ostringstream what;
        what << "|Phi|=" << n << " k=" << k << ": count " << counted << ", listed " << listed << ", tower " << ref;
        o.expect(counted == ref && listed == ref, what.str());
    }
    o.expect(count_types(0, 3) == 16, "(empty,3) != 16");
    o.expect(count_types(0, 4) == 65536, "(empty,4) != 65536");
    o.detail = "(empty,3)=16, (empty,4)=65536";
    return o;
}

Outcome c2_bisim_types() {
    Outcome o;
    Rng rng(2002);
    std::vector<std::vector<std::string>> phis{{}, {"p"}, {"q"}, {"p", "q"}};
    for (int round = 0; round < 500; ++round) {
        auto& phi = phis[round % 4];
        std::size_t n = 1 + round % 8;
        KripkeStructure K = random_structure(rng, n, {"p", "q"}, 0.3);
        TypeTable t(phi);
        for (unsigned k = 0; k <= 3; ++k)
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t b = a; b < n; ++b)
                    o.expect((t.type_of(K, a, k) == t.type_of(K, b, k)) == bisimilar_points(K, a, K, b, phi, k),
                             "structure " + std::to_string(round));
    }
    o.detail = "500 structures, k<=3";
    return o;
}

Outcome c3_hintikka() {
    Outcome o;
    for (unsigned k = 0; k <= 2; ++k) {
        CanonicalModel cm = build_canonical_model({}, k);
        TypeTable t({});
        auto ts = t.enumerate(k);
        for (std::size_t w = 0; w < cm.K.size(); ++w) {
            TypeId own = t.type_of(cm.K, w, k);
            for (auto tau : ts)
                o.expect(check_point(cm.K, w, t.hintikka(tau)) == (tau == own),
                         "k=" + std::to_string(k) + " world " + cm.K.name(w) + " vs " + t.render(tau));
        }
    }
    o.detail = "all types of depth <= 2 against every canonical-model point";
    return o;
}

Outcome c4_scope_laws() {
    Outcome o;
    Rng rng(4004);
    Formula a = prop("sa"), b = prop("sb");
    for (int round = 0; round < 1000; ++round) {
        KripkeStructure K = random_structure(rng, 3 + round % 6, {"p"}, 0.25);
        label_components(rng, K, {"sa", "sb"});
        Team T = random_team(rng, K), S = random_team(rng, K), U = random_team(rng, K);
        std::string id = "instance " + std::to_string(round);
        o.expect(restrict(K, T & S, a) == (restrict(K, T, a) & S) &&
                     (restrict(K, T, a) & S) == (T & restrict(K, S, a)),
                 id + " intersection");
        o.expect(restrict(K, T | S, a) == (restrict(K, T, a) | restrict(K, S, a)), id + " union");
        o.expect(select(K, select(K, T, a, S), b, U) == select(K, select(K, T, b, U), a, S), id + " commute");
        o.expect(restrict(K, select(K, select(K, T, a, S), b, U), a) == (restrict(K, T, a) & S), id + " selection");
        o.expect(restrict(K, image(K, T), a) == image(K, restrict(K, T, a)), id + " image");
        Team Sub = T & S;
        o.expect(image(K, select(K, T, a, Sub)) == select(K, image(K, T), a, image(K, Sub)), id + " propagation");
    }
    o.detail = "1000 instances, six identities each";
    return o;
}

Outcome c5_quantifiers() {
    Outcome o;
    Rng rng(5005);
    Formula a = prop("sa");
    FormulaGen g{{"p", "sa"}, 1, false, false};
    int instances = 0;
    while (instances < 250) {
        KripkeStructure K = random_structure(rng, 3 + instances % 5, {"p"}, 0.3);
        label_components(rng, K, {"sa"});
        Team T = random_team(rng, K, 0.75);
        Team Ta = restrict(K, T, a);
        if (Ta.count() > 5) continue;
        ++instances;
        Formula body = random_formula(rng, g, 3 + instances % 6);
        bool ex = false, all = true, ex1 = false, all1 = true;
        for_each_subset(K.empty_team(), Ta, [&](const Team& X) {
            bool v = naive_eval(K, select(K, T, a, X), body);
            ex = ex || v;
            all = all && v;
            if (X.count() == 1) {
                ex1 = ex1 || v;
                all1 = all1 && v;
            }
            return true;
        });
        std::string id = "instance " + std::to_string(instances) + " " + print_canonical(body);
        o.expect(check(K, T, exists_sub(a, body)) == ex, id + " exists-sub");
        o.expect(check(K, T, forall_sub(a, body)) == all, id + " forall-sub");
        o.expect(check(K, T, exists_one(a, body)) == ex1, id + " exists-one");
        o.expect(check(K, T, forall_one(a, body)) == all1, id + " forall-one");
    }
    o.detail = "250 instances, |T_a| <= 5, exhaustive subteams";
    return o;
}

Outcome c6_chi() {
    Outcome o;
    Formula a = prop("a"), b = prop("b");
    for (unsigned k = 0; k <= 2; ++k) {
        Staircase s = build_staircase({}, k, false);
        TypeTable t({});
        auto ts = t.enumerate(k);
        Formula chi = gen_chi({}, k, a, b, false), chis = gen_chi({}, k, a, b, true);
        for (auto x : ts)
            for (auto y : ts) {
                auto [K, T] = mark(s, t, {x}, {y});
                std::size_t w = K.index("ma0"), v = K.index("mb0");
                o.expect(check(K, T, chi) == bisimilar_points(K, w, K, v, {}, k), "chi_" + std::to_string(k));
            }
        const std::uint64_t subsets = std::uint64_t{1} << ts.size();
        for (std::uint64_t ma = 0; ma < subsets; ++ma)
            for (std::uint64_t mb = 0; mb < subsets; ++mb)
                for (int dup = 0; dup < 2; ++dup) {
                    auto A = subset_of(ts, ma), B = subset_of(ts, mb);
                    if (dup && !A.empty()) A.push_back(A.front());
                    if (dup && !B.empty()) B.push_back(B.back());
                    auto [K, T] = mark(s, t, A, B);
                    bool expect = bisimilar_teams(K, restrict(K, T, a), K, restrict(K, T, b), {}, k);
                    o.expect(check(K, T, chis) == expect, "chi*_" + std::to_string(k));
                }
    }
    o.detail = "k<=2, all point pairs and all type-set pairs (with duplicates)";
    return o;
}

Outcome c7_canon() {
    Outcome o;
    std::size_t deletions = 0;
    for (unsigned k = 0; k <= 2; ++k) {
        Staircase s = build_staircase({}, k, false);
        Formula canon = gen_canon({}, k, stairs(k));
        o.expect(check(s.K, s.team, canon), "staircase k=" + std::to_string(k));
        for (std::size_t w = 0; w < s.K.size(); ++w) {
            Team keep = s.K.full_team();
            keep.reset(w);
            std::vector<std::size_t> map;
            KripkeStructure K = induced(s.K, keep, &map);
            Team T = K.empty_team();
            s.team.for_each([&](std::size_t u) {
                if (map[u] != SIZE_MAX) T.set(map[u]);
            });
            ++deletions;
            o.expect(!check(K, T, canon), "k=" + std::to_string(k) + " deleting " + s.K.name(w));
        }
    }
    Formula f = conj_all({gen_canon({}, 1, stairs(1)), gen_scopes(stairs(1), 1), box_n(bot(), 2)});
    for (int jobs : {1, 2}) {
        DecideOptions opts;
        opts.want_witness = true;
        opts.jobs = jobs;
        DecideResult r = decide(f, DecideMode::Sat, opts);
        o.expect(r.value, "canon_1 & scopes_1 & [][]bot not SAT");
        if (r.witness) {
            auto v = validate_staircase(r.witness->K, r.witness->team, {}, 1, stairs(1));
            o.expect(v.ok, "witness is not a staircase: " + v.message);
            o.expect(check(r.witness->K, r.witness->team, f), "witness does not satisfy the formula");
        }
    }
    o.detail = std::to_string(deletions) + " single-world deletions, decide witness validated";
    return o;
}

Outcome c8_zeta() {
    Outcome o;
    Formula a = prop("a"), b = prop("b");
    for (unsigned k = 0; k <= 2; ++k) {
        Staircase s = build_staircase({}, k, false);
        TypeTable t({});
        auto ts = t.enumerate(k);
        Formula z = gen_zeta({}, k, a, b, s.stairs, false), zs = gen_zeta({}, k, a, b, s.stairs, true);
        for (auto x : ts)
            for (auto y : ts) {
                auto [K, T] = mark(s, t, {x}, {y});
                o.expect(check(K, T, z) == ref_lt(t, x, y), "zeta_" + std::to_string(k));
                o.expect(t.lt(x, y) == ref_lt(t, x, y), "library order k=" + std::to_string(k));
            }
        const std::uint64_t subsets = std::uint64_t{1} << ts.size();
        for (std::uint64_t ma = 0; ma < subsets; ++ma)
            for (std::uint64_t mb = 0; mb < subsets; ++mb) {
                auto A = subset_of(ts, ma), B = subset_of(ts, mb);
                auto [K, T] = mark(s, t, A, B);
                o.expect(check(K, T, zs) == ref_set_lt(t, A, B),
                         "zeta*_" + std::to_string(k) + " masks " + std::to_string(ma) + "," + std::to_string(mb));
            }
    }
    o.detail = "k<=2 exhaustive (k=2: 16 point pairs, 256 set pairs)";
    return o;
}

Outcome c9_decide() {
    Outcome o;
    Rng rng(9009);
    FormulaGen g{{"p"}, 2, false, false};
    int done = 0, skipped = 0, sat = 0;
    while (done < 300 && done + skipped < 900) {
        Formula f = random_formula(rng, g, 2 + (done + skipped) % 11);
        if (tree_size(f) > 12) continue;
        try {
            DecideOptions opts;
            opts.want_witness = true;
            DecideResult s = decide(f, DecideMode::Sat, opts);
            DecideResult v = decide(team_neg(f), DecideMode::Val);
            DecideResult h = decide(conj(f, box_n(bot(), f.md() + 1)), DecideMode::Sat);
            std::string id = print_canonical(f);
            o.expect(s.value == !v.value, "sat/val mismatch on " + id);
            o.expect(s.value == h.value, "height restriction changes " + id);
            if (s.witness) o.expect(check(s.witness->K, s.witness->team, f), "witness fails " + id);
            for (int m = 0; m < 25; ++m) {
                KripkeStructure K = random_structure(rng, 1 + m % 4, {"p"}, 0.4);
                Team T = random_team(rng, K);
                if (check(K, T, f)) {
                    o.expect(s.value, "model found for UNSAT " + id);
                    break;
                }
            }
            sat += s.value;
            ++done;
        } catch (const BudgetExceeded&) {
            ++skipped;
        }
    }
    o.expect(done >= 300, "fewer than 300 formulas decided");
    o.detail = std::to_string(done) + " formulas decided (" + std::to_string(sat) + " SAT), " +
               std::to_string(skipped) + " skipped over budget";
    return o;
}

Outcome c10_strict_lax() {
    Outcome o;
    Rng rng(1010);
    FormulaGen g{{"p", "q"}, 1, true, false};
    for (int round = 0; round < 300; ++round) {
        KripkeStructure K = random_structure(rng, 1 + round % 5, {"p", "q"}, 0.35);
        Team T = random_team(rng, K);
        Formula phi = random_classical(rng, {"p", "q"}, 1, 4);
        Formula psi = random_formula(rng, g, 5);
        std::string id = print_canonical(phi) + " / " + print_canonical(psi);
        bool lax = check(K, T, lax_or(phi, psi), Mode::Strict);
        o.expect(lax == check(K, T, strict_or(phi, psi), Mode::Strict), "or " + id);
        o.expect(lax == naive_eval(K, T, lax_or(phi, psi)), "oracle " + id);
        o.expect(check(K, T, dia(phi), Mode::Strict) == check(K, T, strict_dia(phi), Mode::Strict), "dia " + id);
        std::vector<std::string> phis = round % 2 ? std::vector<std::string>{"p"} : std::vector<std::string>{};
        unsigned i = round % 3;
        o.expect(check(K, T, gen_max(phis, i), Mode::Lax) == check(K, T, strict_rewrite_max(phis, i), Mode::Strict),
                 "max_" + std::to_string(i));
    }
    o.detail = "300 instances";
    return o;
}

Outcome c11_substitution() {
    Outcome o;
    Rng rng(1111);
    FormulaGen g{{"p", "q", "r"}, 2, false, false};
    int accepted = 0, nontrivial = 0, attempts = 0;
    while (accepted < 200 && attempts < 200000) {
        ++attempts;
        KripkeStructure K = random_structure(rng, 2 + attempts % 4, {"p", "q"}, 0.3);
        Team T = random_team(rng, K, 0.4);
        Formula alpha = random_classical(rng, {"p", "q"}, 1, 3);
        Formula beta = random_classical(rng, {"p", "q"}, 1, 3);
        if (alpha.kind() == Kind::Top || alpha == beta) continue;
        Formula shape = random_formula(rng, g, 8);
        Formula phi = substitute(shape, prop("r"), alpha);
        if (count_occurrences(phi, alpha) == 0) continue;
        bool premise = true;
        for (unsigned i = 0; i <= phi.md(); ++i)
            image(K, T, i).for_each([&](std::size_t w) {
                premise = premise && check_point(K, w, alpha) == check_point(K, w, beta);
            });
        if (!premise) continue;
        ++accepted;
        bool globally = true;
        for (std::size_t w = 0; w < K.size(); ++w) globally = globally && check_point(K, w, alpha) == check_point(K, w, beta);
        nontrivial += !globally;
        o.expect(check(K, T, phi) == check(K, T, substitute(phi, alpha, beta)), print_canonical(phi));
    }
    o.expect(accepted >= 200, "fewer than 200 premise instances");
    o.detail = std::to_string(accepted) + " instances, " + std::to_string(nontrivial) +
               " with alpha, beta differing outside the relevant images";
    return o;
}

Outcome c12_layers() {
    Outcome o;
    Rng rng(1212);
    FormulaGen g{{"p"}, 2, false, false};
    int instances = 0;
    std::size_t teams = 0;
    while (instances < 200) {
        unsigned k = 1 + instances % 2;
        std::vector<std::string> layers;
        for (unsigned i = 0; i <= k; ++i) layers.push_back("l_" + std::to_string(i));
        KripkeStructure K = random_structure(rng, 3 + instances % 4, {"p"}, 0.4);
        std::uniform_int_distribution<unsigned> pick(0, k);
        for (auto& l : layers) K.declare(l);
        for (std::size_t w = 0; w < K.size(); ++w) K.label(w, layers[pick(rng)]);
        KripkeStructure R = restrict_edges_by_layers(K, layers);
        unsigned i = instances % (k + 1);
        Formula f = random_formula(rng, g, 7);
        if (f.md() > k - i) continue;
        ++instances;
        Formula fi = layer_translate(f, i, layers);
        Team Vi = K.valuation(layers[i]);
        for_each_subset(K.empty_team(), Vi, [&](const Team& T) {
            ++teams;
            o.expect(check(K, T, fi) == check(R, T, f), print_canonical(f));
            return true;
        });
    }
    int forests = 0;
    while (forests < 100) {
        KripkeStructure K = random_structure(rng, 3 + forests % 5, {"p"}, 0.0);
        for (unsigned d = 0; d <= 2; ++d) K.declare("l_" + std::to_string(d));
        std::vector<unsigned> depth(K.size(), 0);
        std::uniform_int_distribution<std::size_t> pick(0, 99);
        for (std::size_t w = 0; w < K.size(); ++w) {
            if (w > 0 && pick(rng) < 70) {
                std::size_t parent = pick(rng) % w;
                if (depth[parent] < 2) {
                    depth[w] = depth[parent] + 1;
                    K.add_edge(parent, w);
                }
            }
            K.label(w, "l_" + std::to_string(depth[w]));
        }
        ++forests;
        KripkeStructure back = restrict_edges_by_layers(reflexive_transitive_closure(K), {"l_0", "l_1", "l_2"});
        o.expect(back.edges() == K.edges(), "forest " + std::to_string(forests));
    }
    o.detail = "200 layered structures, " + std::to_string(teams) + " teams; 100 forests";
    return o;
}

Outcome c13_reduction() {
    Outcome o;
    ATMSpec m = load_atm_file(data("tiny.json"));
    Reduction red(m, {});
    const std::string t = "loc_t", p = "loc_p";
    auto loc = [&](const KripkeStructure& K, std::size_t w) { return location_of(K, w, {}, 1); };
    std::size_t checks_before = 0;

    // Grid (Claim c), with two malformed extra worlds.
    {
        PretableauWitness wt = build_pretableau_witness(m, {"g_1"});
        KripkeStructure& K = wt.base.K;
        auto pool = wt.scope_worlds["g_1"];
        std::size_t two = K.add_world("bad_two"), none = K.add_world("bad_none");
        for (auto w : {two, none}) K.label(w, "g_1");
        K.label(two, "x__");
        K.label(two, "x_q0__");
        pool.push_back(two);
        pool.push_back(none);
        Team base = wt.base.team;
        Team ext(K.size());
        base.for_each([&](std::size_t w) { ext.set(w); });
        for (auto w : pool) ext.reset(w);
        Formula grid = red.grid(prop("g_1")), pre = red.pre_tableau(prop("g_1"));
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << pool.size()); ++mask) {
            Team T = ext;
            std::set<std::pair<std::uint64_t, std::uint64_t>> locs;
            std::set<std::tuple<std::uint64_t, std::uint64_t, Cell>> cells;
            bool well_formed = true;
            for (std::size_t i = 0; i < pool.size(); ++i)
                if ((mask >> i) & 1U) {
                    T.set(pool[i]);
                    locs.insert(loc(K, pool[i]));
                    try {
                        cells.insert(std::tuple_cat(loc(K, pool[i]), std::make_tuple(cell_of(K, pool[i], m))));
                    } catch (const std::invalid_argument&) {
                        well_formed = false;
                    }
                }
            bool is_grid = well_formed && locs.size() == wt.n * wt.n;
            bool is_pre = is_grid && cells.size() == wt.n * wt.n * red.xi().size();
            o.expect(check(K, T, grid) == is_grid, "grid mask " + std::to_string(mask));
            if (mask < 4096) o.expect(check(K, T, pre) == is_pre, "pre-tableau mask " + std::to_string(mask));
        }
    }
    std::size_t grid_checks = o.cases - checks_before;

    // Tableau (Claims d, e): g_0 is a full pre-tableau, g_1 ranges over all subteams.
    {
        PretableauWitness wt = build_pretableau_witness(m, {"g_0", "g_1"});
        KripkeStructure& K = wt.base.K;
        auto& pool = wt.scope_worlds["g_1"];
        Team ext = wt.base.team;
        for (auto w : pool) ext.reset(w);
        Formula tab = red.tableau(prop("g_1"));
        o.expect(check(K, wt.base.team, red.pre_tableau(prop("g_0"))), "g_0 is not a pre-tableau");
        std::size_t tableaus = 0;
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << pool.size()); ++mask) {
            Team T = ext;
            std::map<std::pair<std::uint64_t, std::uint64_t>, std::set<Cell>> at;
            for (std::size_t i = 0; i < pool.size(); ++i)
                if ((mask >> i) & 1U) {
                    T.set(pool[i]);
                    at[loc(K, pool[i])].insert(cell_of(K, pool[i], m));
                }
            bool is_tab = at.size() == wt.n * wt.n;
            for (auto& [_, cs] : at) is_tab = is_tab && cs.size() == 1;
            tableaus += is_tab;
            bool got = check(K, T, tab);
            o.expect(got == is_tab, "tableau mask " + std::to_string(mask));
            if (is_tab) o.expect(!check(K, T, red.pre_tableau(prop("g_1"))), "tableau passes pre-tableau");
        }
        o.expect(tableaus == 81, "expected 81 tableaus");
    }

    // Orders and successors (Claims a, f) on all marked pairs.
    {
        PretableauWitness wt = build_pretableau_witness(m, {"g_0", "g_1", "g_2"});
        KripkeStructure& K = wt.base.K;
        Team base = wt.base.team, with_g0 = wt.base.team;
        for (auto& s : {"g_1", "g_2"})
            for (auto w : wt.scope_worlds[s]) {
                base.reset(w);
                with_g0.reset(w);
            }
        for (auto w : wt.scope_worlds["g_0"]) base.reset(w);
        Formula a = prop("g_1"), b = prop("g_2");
        Formula et = red.equiv(t, a, b), ep = red.equiv(p, a, b), pt = red.prec(t, a, b), pp = red.prec(p, a, b);
        Formula st = red.succ(t, a, b), sp = red.succ(p, a, b);
        for (auto w : wt.scope_worlds["g_1"])
            for (auto v : wt.scope_worlds["g_2"]) {
                auto [i1, j1] = loc(K, w);
                auto [i2, j2] = loc(K, v);
                Team T = with(base, {w, v});
                std::string id = K.name(w) + "/" + K.name(v);
                o.expect(check(K, T, et) == (i1 == i2), "equiv-t " + id);
                o.expect(check(K, T, ep) == (j1 == j2), "equiv-p " + id);
                o.expect(check(K, T, pt) == (i1 < i2), "prec-t " + id);
                o.expect(check(K, T, pp) == (j1 < j2), "prec-p " + id);
                Team T0 = with(with_g0, {w, v});
                o.expect(check(K, T0, st) == (j1 == j2 && i2 == i1 + 1), "succ-t " + id);
                o.expect(check(K, T0, sp) == (i1 == i2 && j2 == j1 + 1), "succ-p " + id);
            }
    }

    // Windows against the configuration-pair oracle.
    for (auto name : {"tiny.json", "flip.json"}) {
        ATMSpec mm = load_atm_file(data(name));
        o.expect(legal_windows(mm) == harvested_windows(mm, 5), std::string("windows of ") + name);
    }

    // Structure of the reduction output.
    {
        ATMSpec mm = load_atm_file(data("flip.json"));
        for (unsigned k : {1U, 2U}) {
            mm.depth = k;
            std::string x = "01";
            std::uint64_t prev = 0;
            for (int step = 0; step < 4; ++step, x += x) {
                Formula f = reduce(mm, x).formula;
                o.expect(f.md() == k, "md of reduce");
                std::uint64_t size = tree_size(f);
                if (prev) o.expect(size <= prev * 8, "size ratio over doubling input exceeds 8");
                prev = size;
            }
        }
    }
    o.detail = std::to_string(grid_checks) + " grid/pre-tableau subteams, 4096 tableau subteams, 144 marked pairs, "
               "2 window oracles, md and growth";
    return o;
}

}  // namespace

int main() {
    criterion(1, "type counts", 5, c1_type_counts);
    criterion(2, "bisimulation and type agreement", 30, c2_bisim_types);
    criterion(3, "Hintikka formulas", 5, c3_hintikka);
    criterion(4, "scope laws", 10, c4_scope_laws);
    criterion(5, "subteam quantifiers", 30, c5_quantifiers);
    criterion(6, "chi correctness", 120, c6_chi);
    criterion(7, "canon correctness", 120, c7_canon);
    criterion(8, "zeta correctness", 180, c8_zeta);
    criterion(9, "decision procedure consistency", 300, c9_decide);
    criterion(10, "strict and lax semantics", 60, c10_strict_lax);
    criterion(11, "substitution", 60, c11_substitution);
    criterion(12, "frame layering", 120, c12_layers);
    criterion(13, "reduction components", 300, c13_reduction);
    std::printf("%d of 13 criteria failed\n", failed);
    return failed;
}
