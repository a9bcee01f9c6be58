#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "fts/dataset.hpp"
#include "fts/math.hpp"
#include "fts/types.hpp"

namespace fts::svm {

enum class KernelKind { Linear = 0, Rbf = 1, Poly = 2, Sigmoid = 3 };

std::string_view kernel_name(KernelKind k);
std::optional<KernelKind> kernel_from_name(std::string_view name);

struct KernelConfig {
    KernelKind kind = KernelKind::Rbf;
    double gamma = 0.1;
    int degree = 3;      // poly only
    double coef0 = 0.0;  // poly and sigmoid
};

/// k(u, v). Linear: u·v; RBF: exp(-gamma*||u-v||^2);
/// poly: (gamma*u·v + coef0)^degree; sigmoid: tanh(gamma*u·v + coef0).
/// Throws ShapeError on a dimension mismatch.
double kernel_eval(const KernelConfig& k, std::span<const double> u,
                   std::span<const double> v);

/// Full kernel matrix K[i][j] = k(x_i, x_j).
Matrix kernel_matrix(const KernelConfig& k, const Matrix& x);

enum class Reduction { OneVsRest, OneVsOne };

struct SvmConfig {
    double c = 1.0;
    KernelConfig kernel;
    Reduction reduction = Reduction::OneVsRest;
    double tol = 1e-3;
    std::size_t max_sweeps = 0;  // 0 = 10 * n_samples full sweeps
};

/// One soft-margin machine. Coefficients are alpha_i * y_i for the kept
/// support vectors; the decision value is sum_i coeff_i * k(sv_i, x) + bias.
struct BinarySvm {
    int positive_class = 0;   // terrain index
    int negative_class = -1;  // terrain index, or -1 for "rest"
    Matrix support_vectors;
    std::vector<double> coefficients;
    double bias = 0.0;
    bool converged = true;

    double decision(const KernelConfig& kernel, std::span<const double> x) const;
};

/// Raw SMO output, exposed for solver verification.
struct SmoResult {
    std::vector<double> alpha;
    double bias = 0.0;
    bool converged = true;
    std::size_t sweeps = 0;
};

/// Soft-margin dual solver: Platt-style pairwise coordinate ascent over a
/// precomputed kernel matrix. Deterministic (the second-choice heuristics
/// use a rotating start instead of a random one). Terminates when no point
/// violates the KKT conditions beyond tol, or flags converged = false after
/// max_sweeps full sweeps and returns the best iterate.
SmoResult solve_smo(const Matrix& kernel, std::span<const int> y, double c,
                    double tol, std::size_t max_sweeps);

/// Dual objective W(alpha) = sum alpha_i - 1/2 sum_ij alpha_i alpha_j y_i y_j K_ij.
double dual_objective(const Matrix& kernel, std::span<const int> y,
                      std::span<const double> alpha);

/// Train one binary machine on (already standardized) features with labels
/// in {-1, +1}. Throws DataError if only one class is present.
BinarySvm train_binary(const Matrix& x, std::span<const int> y, const SvmConfig& cfg);

/// Multiclass kernel machine: the scaler, the reduction scheme's binary
/// machines, and the class set in canonical order.
struct SvmModel {
    Scaler scaler;
    KernelConfig kernel;
    Reduction reduction = Reduction::OneVsRest;
    std::vector<Terrain> classes;
    std::vector<BinarySvm> machines;

    bool fully_converged() const;

    /// Predict one raw (unstandardized) feature vector. One-vs-rest takes
    /// the argmax decision value; one-vs-one takes the majority vote with
    /// ties broken by summed decision values, then canonical class order.
    Terrain predict(std::span<const double> raw_features) const;
    std::vector<Terrain> predict(const Matrix& raw_features) const;
};

/// Fit the scaler on the given samples, then train N (one-vs-rest) or
/// N(N-1)/2 (one-vs-one) machines. All rows must be labeled and at least
/// two classes present.
SvmModel train_multiclass(const SampleSet& labeled, const SvmConfig& cfg);

/// The hyperparameter grid; defaults cover the standard search space of
/// 4 x 4 x 4 = 64 combinations.
struct GridSpec {
    std::vector<double> c_values = {0.1, 1.0, 10.0, 100.0};
    std::vector<double> gamma_values = {1.0, 0.1, 0.01, 0.001};
    std::vector<KernelKind> kernels = {KernelKind::Linear, KernelKind::Rbf,
                                       KernelKind::Poly, KernelKind::Sigmoid};
};

struct GridRow {
    KernelKind kernel = KernelKind::Linear;
    double c = 1.0;
    double gamma = 1.0;
    double train_accuracy = 0.0;
    double test_accuracy = 0.0;
    double seconds = 0.0;
};

struct GridSearchResult {
    std::vector<GridRow> rows;  // kernel-major enumeration order
    SvmConfig best;
    double best_test_accuracy = 0.0;
};

/// Exhaustively train every combination on the train split and score it on
/// the test split. The winner is the highest test accuracy; ties prefer the
/// simpler kernel (linear < rbf < poly < sigmoid), then smaller C, then
/// smaller gamma. Combinations may train on `jobs` worker threads; results
/// do not depend on the thread count.
GridSearchResult grid_search(const SampleSet& labeled, const GridSpec& grid,
                             const SplitIndices& split, Reduction reduction,
                             unsigned jobs = 1);

}  // namespace fts::svm
