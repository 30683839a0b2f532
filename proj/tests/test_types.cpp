#include <doctest.h>

#include "mtl/checker.hpp"
#include "mtl/types.hpp"
#include "support.hpp"

using namespace mtl;
using namespace mtl::testing;

TEST_CASE("type counts follow the tower") {
    CHECK(count_types(0, 0) == 1);
    CHECK(count_types(0, 1) == 2);
    CHECK(count_types(0, 2) == 4);
    CHECK(count_types(0, 3) == 16);
    CHECK(count_types(0, 4) == 65536);
    CHECK(count_types(1, 1) == 8);
    CHECK(count_types(2, 1) == 4 * 16);
    CHECK(exp_star(1, 3) == 24);
    CHECK(exp_tower(2, 2) == 16);
    CHECK(count_types_capped(0, 5, 1000000) == std::nullopt);
    CHECK(count_types_capped(0, 3, 100) == 16);
}

TEST_CASE("enumeration matches counts and is sorted") {
    for (auto [n, k] : std::vector<std::pair<int, unsigned>>{{0, 0}, {0, 3}, {1, 2}, {2, 1}}) {
        std::vector<std::string> phi;
        for (int i = 0; i < n; ++i) phi.push_back("p" + std::to_string(i));
        TypeTable t(phi);
        auto ts = t.enumerate(k);
        CHECK(BigInt(ts.size()) == count_types(phi.size(), k));
        for (std::size_t i = 1; i < ts.size(); ++i) CHECK(t.lt(ts[i - 1], ts[i]));
    }
    TypeTable t({});
    CHECK_THROWS_AS(t.enumerate(4, 1000), BudgetExceeded);
}

TEST_CASE("type order is a strict total order") {
    TypeTable t({"p"});
    auto ts = t.enumerate(1);
    for (auto a : ts) {
        CHECK_FALSE(t.lt(a, a));
        for (auto b : ts)
            if (a != b) CHECK(t.lt(a, b) != t.lt(b, a));
    }
}

TEST_CASE("rendering") {
    TypeTable t({"p", "q"});
    KripkeStructure K;
    K.add_world("a");
    K.add_world("b");
    K.label(0, "p");
    K.add_edge(0, 1);
    CHECK(t.render(t.type_of(K, 1, 0)) == "{}");
    CHECK(t.render(t.type_of(K, 0, 0)) == "{p}");
    CHECK(t.render(t.type_of(K, 0, 1)) == "({p},[{}])");
}

TEST_CASE("type equality is bisimilarity") {
    Rng rng(17);
    for (int round = 0; round < 100; ++round) {
        KripkeStructure K = random_structure(rng, 6, {"p", "q"}, 0.3);
        TypeTable t({"p", "q"});
        for (unsigned k = 0; k <= 2; ++k)
            for (std::size_t a = 0; a < K.size(); ++a)
                for (std::size_t b = 0; b < K.size(); ++b)
                    CHECK((t.type_of(K, a, k) == t.type_of(K, b, k)) == bisimilar_points(K, a, K, b, {"p", "q"}, k));
    }
}

TEST_CASE("team bisimulation compares type sets") {
    Rng rng(19);
    for (int round = 0; round < 60; ++round) {
        KripkeStructure K = random_structure(rng, 5, {"p"}, 0.3);
        TypeTable t({"p"});
        Team A = random_team(rng, K), B = random_team(rng, K);
        CHECK((t.types_of_team(K, A, 1) == t.types_of_team(K, B, 1)) == bisimilar_teams(K, A, K, B, {"p"}, 1));
    }
}

TEST_CASE("Hintikka formulas characterise types") {
    for (unsigned k = 0; k <= 2; ++k) {
        TypeTable t({});
        auto ts = t.enumerate(k);
        Rng rng(k);
        for (int round = 0; round < 30; ++round) {
            KripkeStructure K = random_structure(rng, 5, {}, 0.35);
            for (std::size_t w = 0; w < K.size(); ++w) {
                TypeId own = t.type_of(K, w, k);
                for (auto tau : ts) CHECK(check_point(K, w, t.hintikka(tau)) == (tau == own));
            }
        }
    }
}

TEST_CASE("parallel type kernel matches the serial one") {
    Rng rng(23);
    KripkeStructure K = random_structure(rng, 40, {"p"}, 0.1);
    TypeTable t({"p"});
    std::vector<std::size_t> ws;
    for (std::size_t i = 0; i < K.size(); ++i) ws.push_back(i);
    auto par = t.types_of_worlds_parallel(K, ws, 2, 4);
    for (std::size_t i = 0; i < ws.size(); ++i) CHECK(par[i] == t.type_of(K, ws[i], 2));
}
