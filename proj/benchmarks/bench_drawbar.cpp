#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "fts/drawbar.hpp"
#include "fts/telemetry.hpp"

using namespace fts;
using namespace fts::drawbar;

namespace {

TelemetryStream noisy_wheel(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> force(15.0, 5.0);
    std::normal_distribution<double> lever(0.15, 0.03);
    TelemetryStream s;
    s.sensor = SensorId::fts(SensorPosition::FL);
    s.frame = Frame::Rover;
    s.channels.assign(6, {});
    for (std::size_t i = 0; i < n; ++i) {
        const double fx = force(rng);
        s.timestamps.push_back(static_cast<double>(i) * 0.01);
        s.channels[0].push_back(fx);
        s.channels[1].push_back(0.0);
        s.channels[2].push_back(45.0);
        s.channels[3].push_back(0.0);
        s.channels[4].push_back(fx * lever(rng));
        s.channels[5].push_back(2.0);
    }
    return s;
}

}  // namespace

static void BM_BuildLeverSeries(benchmark::State& state) {
    const auto stream = noisy_wheel(static_cast<std::size_t>(state.range(0)), 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(build_lever_series(stream));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BuildLeverSeries)->Arg(10000)->Arg(100000);

static void BM_FilterByLever(benchmark::State& state) {
    auto series =
        build_lever_series(noisy_wheel(static_cast<std::size_t>(state.range(0)), 2));
    const WheelGeometry geometry;
    for (auto _ : state) {
        filter_by_lever(series, geometry, 0.02);
        benchmark::DoNotOptimize(series);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FilterByLever)->Arg(10000)->Arg(100000);

static void BM_StableIntervals(benchmark::State& state) {
    auto series =
        build_lever_series(noisy_wheel(static_cast<std::size_t>(state.range(0)), 3));
    filter_by_lever(series, WheelGeometry{}, 0.05);
    const StableParams params;
    for (auto _ : state) {
        benchmark::DoNotOptimize(detect_stable_intervals(series, params));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_StableIntervals)->Arg(10000)->Arg(100000);

BENCHMARK_MAIN();
