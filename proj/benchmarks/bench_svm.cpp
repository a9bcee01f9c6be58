#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "fts/svm.hpp"

using namespace fts;
using namespace fts::svm;

namespace {

// Two overlapping Gaussian clouds, the usual soft-margin workload.
void two_clouds(Matrix& x, std::vector<int>& y, std::size_t per_class,
                std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, 1.0);
    x = Matrix(2 * per_class, 4);
    y.clear();
    for (std::size_t i = 0; i < 2 * per_class; ++i) {
        const double center = i < per_class ? 1.0 : -1.0;
        for (std::size_t j = 0; j < 4; ++j) x.at(i, j) = center + noise(rng);
        y.push_back(i < per_class ? 1 : -1);
    }
}

}  // namespace

static void BM_KernelMatrix(benchmark::State& state) {
    Matrix x;
    std::vector<int> y;
    two_clouds(x, y, static_cast<std::size_t>(state.range(0)) / 2, 11);
    const KernelConfig cfg{.kind = KernelKind::Rbf, .gamma = 0.1};
    for (auto _ : state) {
        benchmark::DoNotOptimize(kernel_matrix(cfg, x));
    }
}
BENCHMARK(BM_KernelMatrix)->Arg(64)->Arg(256);

static void BM_SmoSolve(benchmark::State& state) {
    Matrix x;
    std::vector<int> y;
    two_clouds(x, y, static_cast<std::size_t>(state.range(0)) / 2, 13);
    const KernelConfig cfg{.kind = KernelKind::Rbf, .gamma = 0.1};
    const Matrix k = kernel_matrix(cfg, x);
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_smo(k, y, 1.0, 1e-3, 0));
    }
}
BENCHMARK(BM_SmoSolve)->Arg(64)->Arg(128)->Arg(256);

static void BM_Decision(benchmark::State& state) {
    Matrix x;
    std::vector<int> y;
    two_clouds(x, y, 64, 17);
    SvmConfig cfg;
    cfg.kernel.kind = KernelKind::Rbf;
    cfg.kernel.gamma = 0.1;
    const BinarySvm machine = train_binary(x, y, cfg);
    const auto probe = x.row(0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(machine.decision(cfg.kernel, probe));
    }
}
BENCHMARK(BM_Decision);

BENCHMARK_MAIN();
