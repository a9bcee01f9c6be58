#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "fts/mlp.hpp"

using namespace fts;
using namespace fts::mlp;

namespace {

// Four separable blobs sized like one windowed traverse.
SampleSet blob_set(std::size_t per_class, std::size_t dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, 0.5);
    SampleSet set;
    for (std::size_t j = 0; j < dim; ++j) {
        set.feature_names.push_back("f" + std::to_string(j));
    }
    set.features = Matrix(4 * per_class, dim);
    for (std::size_t k = 0; k < 4; ++k) {
        for (std::size_t i = 0; i < per_class; ++i) {
            const std::size_t r = k * per_class + i;
            for (std::size_t j = 0; j < dim; ++j) {
                set.features.at(r, j) = static_cast<double>(k) * 3.0 + noise(rng);
            }
            set.window_starts.push_back(static_cast<double>(r));
            set.labels.push_back(kAllTerrains[k]);
        }
    }
    return set;
}

MlpModel small_model(std::size_t dim, std::uint64_t seed) {
    MlpConfig cfg;
    cfg.input_dim = dim;
    std::vector<double> means(dim, 0.0), scales(dim, 1.0);
    std::mt19937_64 rng(seed);
    return init_model(cfg, Scaler::from_parameters(means, scales),
                      {kAllTerrains.begin(), kAllTerrains.end()}, rng);
}

}  // namespace

static void BM_Forward(benchmark::State& state) {
    const std::size_t dim = static_cast<std::size_t>(state.range(0));
    const MlpModel model = small_model(dim, 3);
    std::vector<double> raw(dim, 0.5);
    for (auto _ : state) {
        benchmark::DoNotOptimize(model.forward(raw));
    }
}
BENCHMARK(BM_Forward)->Arg(15)->Arg(225);

static void BM_TrainEpoch(benchmark::State& state) {
    const SampleSet data = blob_set(60, 30, 7);
    MlpConfig cfg;
    cfg.epochs = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(train(data, data, cfg));
    }
    state.SetItemsProcessed(state.iterations() * data.size());
}
BENCHMARK(BM_TrainEpoch);

BENCHMARK_MAIN();
