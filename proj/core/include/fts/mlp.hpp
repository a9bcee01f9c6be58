#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "fts/dataset.hpp"
#include "fts/math.hpp"
#include "fts/types.hpp"

namespace fts::mlp {

struct MlpConfig {
    std::size_t input_dim = 0;   // 0 = infer from the training set
    std::size_t hidden_layers = 2;
    std::size_t hidden_units = 64;
    std::size_t output_dim = kTerrainCount;
    double input_dropout = 0.10;
    double hidden_dropout = 0.20;
    std::size_t batch_size = 32;
    std::size_t epochs = 50;
    double learning_rate = 1e-3;
    double momentum = 0.9;
    std::uint64_t seed = 42;
};

struct Layer {
    Matrix weights;            // out x in
    std::vector<double> bias;  // out
};

/// Pre- and post-activation values for every layer of one forward pass,
/// recorded for solver verification.
struct ForwardTrace {
    std::vector<std::vector<double>> pre;  // per layer
    std::vector<std::vector<double>> act;  // per layer (output layer: softmax)
};

struct MlpModel {
    MlpConfig config;
    Scaler scaler;
    std::vector<Terrain> classes;  // canonical order; index = output unit
    std::vector<Layer> layers;     // hidden_layers hidden + 1 output

    /// Softmax class probabilities for one standardized input. Dropout off.
    std::vector<double> forward_standardized(std::span<const double> z,
                                             ForwardTrace* trace = nullptr) const;

    /// Softmax class probabilities for one raw feature vector.
    std::vector<double> forward(std::span<const double> raw) const;

    Terrain predict(std::span<const double> raw) const;
    std::vector<Terrain> predict(const Matrix& raw) const;
};

/// Glorot-uniform weights (plus or minus sqrt(6 / (fan_in + fan_out))),
/// zero biases. The scaler and class list are taken as given.
MlpModel init_model(const MlpConfig& cfg, const Scaler& scaler,
                    std::vector<Terrain> classes, std::mt19937_64& rng);

/// Inverted dropout: each value is zeroed with probability rate, survivors
/// are scaled by 1/(1-rate), so the expectation matches the unmasked input.
/// This is the exact mask the training pass draws.
void apply_inverted_dropout(std::vector<double>& values, double rate,
                            std::mt19937_64& rng);

struct EpochStats {
    std::size_t epoch = 0;         // 1-based
    double train_loss = 0.0;       // mean cross-entropy seen during the epoch
    double train_accuracy = 0.0;   // full pass, dropout off
    double eval_loss = 0.0;        // mean cross-entropy on the eval set
    double eval_accuracy = 0.0;
};

struct TrainResult {
    MlpModel model;
    std::vector<EpochStats> curves;
};

/// Minibatch SGD with momentum on softmax cross-entropy. Inverted dropout
/// is applied to the input and after every hidden layer except the last.
/// One seeded generator drives init, shuffles and dropout masks, so the
/// result is deterministic per seed. Throws ConvergenceError, naming the
/// epoch, if the loss stops being finite.
TrainResult train(const SampleSet& train_set, const SampleSet& eval_set,
                  const MlpConfig& cfg);

/// Mean cross-entropy and its analytic parameter gradient on one batch of
/// standardized rows. Gradient order: per layer, weights row-major, then
/// biases. Dropout off.
double batch_loss_and_gradient(const MlpModel& model, const Matrix& z,
                               std::span<const std::size_t> targets,
                               std::vector<double>* gradient);

/// Central-difference check of the analytic gradient: max over parameters
/// of |analytic - numeric| / max(|analytic| + |numeric|, 1e-4). The floor
/// keeps round-off in near-zero gradients from dominating the ratio.
double gradient_check(const MlpModel& model, const Matrix& z,
                      std::span<const std::size_t> targets, double h = 1e-5);

}  // namespace fts::mlp
