#include <benchmark/benchmark.h>

#include "walkcast/analytic.hpp"
#include "walkcast/broadcast.hpp"
#include "walkcast/rng.hpp"
#include "walkcast/walk.hpp"

namespace {

using namespace walkcast;

void BM_SubstreamDraw(benchmark::State& state) {
    StreamKey key = stream_key(SeedSpec{42, 0, 0}, Stream::Step);
    std::uint64_t agent = 0, round = 0, acc = 0;
    for (auto _ : state) {
        acc ^= substream_u64(key, agent++, round++);
    }
    benchmark::DoNotOptimize(acc);
}
BENCHMARK(BM_SubstreamDraw);

void BM_StepAllCycle(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const int k = static_cast<int>(state.range(1));
    GraphTopology g(GraphKind::Cycle, n);
    SeedSpec seed{7, 0, 0};
    ProcessState s = initialize(g, k, seed);
    StreamKey key = stream_key(seed, Stream::Step);
    std::int64_t round = 1;
    for (auto _ : state) {
        step_all_inplace(g, s.positions, key, round++);
    }
    state.SetItemsProcessed(state.iterations() * k);
}
BENCHMARK(BM_StepAllCycle)->Args({1024, 32})->Args({1024, 4096})->Args({65536, 4096});

void BM_RunRoundCycle(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const int k = static_cast<int>(state.range(1));
    GraphTopology g(GraphKind::Cycle, n);
    SeedSpec seed{7, 0, 0};
    ProcessState s = initialize(g, k, seed);
    for (auto _ : state) {
        s = run_round(g, std::move(s), seed);
    }
    state.SetItemsProcessed(state.iterations() * k);
}
BENCHMARK(BM_RunRoundCycle)->Args({1024, 32})->Args({1024, 4096})->Args({65536, 4096});

void BM_TrialCycle(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const int k = static_cast<int>(state.range(1));
    GraphTopology g(GraphKind::Cycle, n);
    std::uint64_t trial = 0;
    for (auto _ : state) {
        TrialResult r = run_to_completion(g, k, SeedSpec{11, 0, trial++}, 100LL * n * n);
        benchmark::DoNotOptimize(r.xi);
    }
}
BENCHMARK(BM_TrialCycle)->Args({256, 16})->Args({1024, 32});

void BM_ZWalkDistribution(benchmark::State& state) {
    const std::int64_t t = state.range(0);
    const bool lazy = state.range(1) != 0;
    for (auto _ : state) {
        auto dist = z_walk_distribution(lazy, t);
        benchmark::DoNotOptimize(dist);
    }
}
BENCHMARK(BM_ZWalkDistribution)->Args({128, 0})->Args({128, 1})->Args({512, 0});

}  // namespace

BENCHMARK_MAIN();
