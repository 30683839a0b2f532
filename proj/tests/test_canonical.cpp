#include <doctest.h>

#include "mtl/canonical.hpp"
#include "mtl/checker.hpp"
#include "mtl/encodings.hpp"
#include "support.hpp"

using namespace mtl;
using namespace mtl::testing;

namespace {

std::vector<std::string> stairs(unsigned k) {
    std::vector<std::string> s;
    for (unsigned i = 0; i <= k; ++i) s.push_back(stair_name(i));
    return s;
}

}  // namespace

TEST_CASE("canonical model realizes every type in its top layer") {
    for (auto [phi, k] : std::vector<std::pair<std::vector<std::string>, unsigned>>{
             {{}, 0}, {{}, 2}, {{"p"}, 1}, {{"p", "q"}, 1}}) {
        CanonicalModel cm = build_canonical_model(phi, k);
        TypeTable t(phi);
        CHECK(t.types_of_team(cm.K, cm.layer_team(k), k) == t.enumerate(k));
        CHECK(cm.layers.at(k).size() == t.enumerate(k).size());
        CHECK(is_canonical_with_offset(cm.K, cm.layer_team(k), phi, k, 0));
    }
    CHECK_THROWS_AS(build_canonical_model({}, 5, 1000), BudgetExceeded);
}

TEST_CASE("pruning constraints drop violating worlds") {
    CanonicalModel full = build_canonical_model({"p"}, 1);
    CanonicalModel pruned = build_canonical_model({"p"}, 1, kDefaultBudget, {prop("p"), top()});
    CHECK(pruned.layers[1].size() * 2 == full.layers[1].size());
}

TEST_CASE("built staircases validate") {
    for (unsigned k = 0; k <= 2; ++k)
        for (bool prime : {false, true}) {
            Staircase s = build_staircase({}, k, prime);
            auto v = validate_staircase(s.K, s.team, {}, k, s.stairs, s.prime);
            CHECK_MESSAGE(v.ok, v.message);
            CHECK(is_forest_rooted_at(s.K, s.team, k));
        }
    Staircase p = build_staircase({"p"}, 1, false);
    CHECK(validate_staircase(p.K, p.team, {"p"}, 1, p.stairs).ok);
}

TEST_CASE("removing a stair root breaks the staircase") {
    Staircase s = build_staircase({}, 2, false);
    s.team.for_each([&](std::size_t w) {
        Team T = s.team;
        T.reset(w);
        CHECK_FALSE(validate_staircase(s.K, T, {}, 2, s.stairs).ok);
    });
}

TEST_CASE("canon_k holds on staircases and fails after deletions, k <= 1") {
    for (unsigned k = 0; k <= 1; ++k) {
        Staircase s = build_staircase({}, k, false);
        Formula canon = gen_canon({}, k, stairs(k));
        CHECK(check(s.K, s.team, canon));
        s.team.for_each([&](std::size_t w) {
            Team T = s.team;
            T.reset(w);
            CHECK_FALSE(check(s.K, T, canon));
        });
    }
}

TEST_CASE("canon' holds on primed staircases") {
    Staircase s = build_staircase({}, 1, true);
    CHECK(check(s.K, s.team, gen_canon({}, 1, stairs(1), std::string(kPrimeStair))));
}

TEST_CASE("offset canonicity examples") {
    KripkeStructure K;
    K.add_world("a");
    K.add_world("b");
    K.label(0, "p");
    CHECK(is_canonical_with_offset(K, K.full_team(), {"p"}, 0, 0));
    CHECK_FALSE(is_canonical_with_offset(K, point(K, 0), {"p"}, 0, 0));
}

TEST_CASE("metadata names the stairs") {
    Staircase s = build_staircase({}, 1, true);
    std::string j = model_to_json(s.K, s.team, s.metadata_json());
    CHECK(j.find("\"stairs\"") != std::string::npos);
    Model m = load_model_json(j);
    CHECK(m.K.size() == s.K.size());
    CHECK(m.team == s.team);
}
