#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "fts/windows.hpp"

using namespace fts;

namespace {

std::vector<double> random_window(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist(0.0, 1.0);
    std::vector<double> v(n);
    for (double& x : v) x = dist(rng);
    return v;
}

}  // namespace

static void BM_WindowStatistics(benchmark::State& state) {
    const auto window = random_window(static_cast<std::size_t>(state.range(0)), 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(window_statistics(window));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_WindowStatistics)->Arg(50)->Arg(100)->Arg(1000);

static void BM_RatioClamped(benchmark::State& state) {
    const auto fx = random_window(100, 2);
    const auto tz = random_window(100, 3);
    for (auto _ : state) {
        for (std::size_t i = 0; i < fx.size(); ++i) {
            benchmark::DoNotOptimize(fx_over_tz(fx[i], tz[i]));
        }
    }
    state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_RatioClamped);

BENCHMARK_MAIN();
