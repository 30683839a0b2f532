#include <benchmark/benchmark.h>

#include "mtl/canonical.hpp"
#include "mtl/decide.hpp"
#include "mtl/encodings.hpp"
#include "mtl/types.hpp"

using namespace mtl;

namespace {

// Exhaustive subteam search: no subteam of the 14 candidates has the
// property, so all 2^14 subteams are checked.
void BM_FirstSubset(benchmark::State& st) {
    CanonicalModel cm = build_canonical_model({"p", "q"}, 1);
    auto layer = cm.layer_team(1).members();
    Team cand(cm.K.size());
    for (std::size_t i = 0; i < 14 && i < layer.size(); ++i) cand.set(layer[i]);
    Formula p = prop("p"), q = prop("q");
    Formula never = conj_all({exists_point(conj(p, q)), exists_point(conj(ml_neg(p), ml_neg(q))), dep({p}),
                              box(lax_or(p, ml_neg(p)))});
    for (auto _ : st) benchmark::DoNotOptimize(first_subset_with(cm.K, cand, never, true, static_cast<int>(st.range(0))));
}
BENCHMARK(BM_FirstSubset)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_DecideCanon(benchmark::State& st) {
    std::vector<std::string> stairs{stair_name(0), stair_name(1)};
    Formula f = conj_all({gen_canon({}, 1, stairs), gen_scopes(stairs, 1), box_n(bot(), 2)});
    DecideOptions opts;
    opts.jobs = static_cast<int>(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(decide(f, DecideMode::Sat, opts).value);
}
BENCHMARK(BM_DecideCanon)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

// Serial reference: one type_of call per world.
void BM_TypesSerial(benchmark::State& st) {
    CanonicalModel cm = build_canonical_model({"p"}, 2);
    for (auto _ : st) {
        TypeTable t({"p"});
        for (std::size_t w = 0; w < cm.K.size(); ++w) benchmark::DoNotOptimize(t.type_of(cm.K, w, 2));
    }
}
BENCHMARK(BM_TypesSerial)->Unit(benchmark::kMillisecond);

void BM_TypesParallel(benchmark::State& st) {
    CanonicalModel cm = build_canonical_model({"p"}, 2);
    std::vector<std::size_t> worlds(cm.K.size());
    for (std::size_t w = 0; w < worlds.size(); ++w) worlds[w] = w;
    for (auto _ : st) {
        TypeTable t({"p"});
        benchmark::DoNotOptimize(t.types_of_worlds_parallel(cm.K, worlds, 2, static_cast<int>(st.range(0))));
    }
}
BENCHMARK(BM_TypesParallel)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
