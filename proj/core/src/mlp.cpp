#include "fts/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "fts/errors.hpp"

namespace fts::mlp {

namespace {

void check_config(const MlpConfig& cfg) {
    if (cfg.hidden_layers == 0) throw ConfigError("mlp: need at least one hidden layer");
    if (cfg.hidden_units == 0) throw ConfigError("mlp: hidden_units must be positive");
    if (cfg.output_dim < 2) throw ConfigError("mlp: output_dim must be at least 2");
    if (cfg.batch_size == 0) throw ConfigError("mlp: batch_size must be positive");
    if (cfg.epochs == 0) throw ConfigError("mlp: epochs must be positive");
    if (!(cfg.learning_rate > 0.0)) throw ConfigError("mlp: learning_rate must be positive");
    if (cfg.momentum < 0.0 || cfg.momentum >= 1.0) {
        throw ConfigError("mlp: momentum must be in [0, 1)");
    }
    if (cfg.input_dropout < 0.0 || cfg.input_dropout >= 1.0 ||
        cfg.hidden_dropout < 0.0 || cfg.hidden_dropout >= 1.0) {
        throw ConfigError("mlp: dropout rates must be in [0, 1)");
    }
}

void softmax_inplace(std::vector<double>& v) {
    const double peak = *std::max_element(v.begin(), v.end());
    double total = 0.0;
    for (double& x : v) {
        x = std::exp(x - peak);
        total += x;
    }
    for (double& x : v) x /= total;
}

std::vector<double> affine(const Layer& layer, std::span<const double> in) {
    const std::size_t out_dim = layer.weights.rows();
    if (layer.weights.cols() != in.size()) {
        throw ShapeError("mlp: layer expects " + std::to_string(layer.weights.cols()) +
                         " inputs, got " + std::to_string(in.size()));
    }
    std::vector<double> out(out_dim);
    for (std::size_t o = 0; o < out_dim; ++o) {
        out[o] = layer.bias[o] + dot(layer.weights.row(o), in);
    }
    return out;
}

struct Gradients {
    std::vector<Matrix> weights;
    std::vector<std::vector<double>> bias;

    explicit Gradients(const std::vector<Layer>& layers) {
        weights.reserve(layers.size());
        bias.reserve(layers.size());
        for (const Layer& l : layers) {
            weights.emplace_back(l.weights.rows(), l.weights.cols());
            bias.emplace_back(l.bias.size(), 0.0);
        }
    }

    void scale(double s) {
        for (Matrix& w : weights) {
            for (double& v : w.data()) v *= s;
        }
        for (auto& b : bias) {
            for (double& v : b) v *= s;
        }
    }
};

// Forward pass on one standardized row with dropout masks, keeping the
// post-dropout activations for the backward pass. layers_in[0] is the
// (masked) network input.
struct TrainTrace {
    std::vector<std::vector<double>> inputs;  // per layer, post-dropout
    std::vector<std::vector<double>> pre;     // per layer
    std::vector<double> probabilities;
};

TrainTrace forward_train(const MlpModel& model, std::span<const double> z,
                         std::mt19937_64& rng) {
    TrainTrace trace;
    std::vector<double> a(z.begin(), z.end());
    apply_inverted_dropout(a, model.config.input_dropout, rng);
    for (std::size_t l = 0; l < model.layers.size(); ++l) {
        trace.inputs.push_back(a);
        std::vector<double> pre = affine(model.layers[l], a);
        trace.pre.push_back(pre);
        if (l + 1 < model.layers.size()) {
            for (double& x : pre) x = std::max(0.0, x);
            // No mask after the last hidden layer.
            if (l + 2 < model.layers.size()) {
                apply_inverted_dropout(pre, model.config.hidden_dropout, rng);
            }
            a = std::move(pre);
        } else {
            softmax_inplace(pre);
            trace.probabilities = std::move(pre);
        }
    }
    return trace;
}

// Backward pass for one sample; adds into the accumulator.
double backward_accumulate(const MlpModel& model, const TrainTrace& trace,
                           std::size_t target, Gradients& grads) {
    const std::size_t depth = model.layers.size();
    const double p = trace.probabilities[target];
    const double loss = -std::log(std::max(p, std::numeric_limits<double>::min()));

    // Output layer: d(loss)/d(pre) = probabilities - onehot.
    std::vector<double> delta = trace.probabilities;
    delta[target] -= 1.0;

    for (std::size_t l = depth; l-- > 0;) {
        const Layer& layer = model.layers[l];
        const auto& in = trace.inputs[l];
        for (std::size_t o = 0; o < layer.weights.rows(); ++o) {
            grads.bias[l][o] += delta[o];
            auto grow = grads.weights[l].row(o);
            for (std::size_t i = 0; i < in.size(); ++i) grow[i] += delta[o] * in[i];
        }
        if (l == 0) break;
        std::vector<double> prev(layer.weights.cols(), 0.0);
        for (std::size_t o = 0; o < layer.weights.rows(); ++o) {
            const auto wrow = layer.weights.row(o);
            for (std::size_t i = 0; i < prev.size(); ++i) prev[i] += delta[o] * wrow[i];
        }
        // Through the dropout mask: inputs[l] is the masked activation, so a
        // zeroed unit blocks the gradient and a kept one carries the 1/keep
        // factor. Recover the factor from the mask itself.
        const auto& pre = trace.pre[l - 1];
        for (std::size_t i = 0; i < prev.size(); ++i) {
            if (pre[i] <= 0.0) {
                prev[i] = 0.0;  // ReLU gate
            } else if (in[i] == 0.0) {
                prev[i] = 0.0;  // dropped unit
            } else {
                prev[i] *= in[i] / pre[i];  // 1/keep, or 1 when no mask
            }
        }
        delta = std::move(prev);
    }
    return loss;
}

std::vector<Terrain> class_set(std::span<const Terrain> labels) {
    std::vector<Terrain> classes;
    for (Terrain t : kAllTerrains) {
        if (std::find(labels.begin(), labels.end(), t) != labels.end()) {
            classes.push_back(t);
        }
    }
    return classes;
}

struct EvalResult {
    double loss = 0.0;
    double accuracy = 0.0;
};

// Mean cross-entropy and accuracy with dropout off.
EvalResult evaluate_on(const MlpModel& model, const Matrix& z,
                       std::span<const std::size_t> targets) {
    EvalResult out;
    if (z.rows() == 0) return out;
    std::size_t hits = 0;
    KahanSum loss;
    for (std::size_t r = 0; r < z.rows(); ++r) {
        const auto probs = model.forward_standardized(z.row(r));
        const std::size_t arg =
            std::max_element(probs.begin(), probs.end()) - probs.begin();
        if (arg == targets[r]) ++hits;
        const double p = probs[targets[r]];
        loss.add(-std::log(std::max(p, std::numeric_limits<double>::min())));
    }
    out.loss = loss.value() / static_cast<double>(z.rows());
    out.accuracy = static_cast<double>(hits) / static_cast<double>(z.rows());
    return out;
}

}  // namespace

void apply_inverted_dropout(std::vector<double>& values, double rate,
                            std::mt19937_64& rng) {
    if (rate <= 0.0) return;
    if (rate >= 1.0) throw ConfigError("mlp: dropout rate must be below 1");
    const double keep = 1.0 - rate;
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    for (double& v : values) {
        if (uniform(rng) < rate) {
            v = 0.0;
        } else {
            v /= keep;
        }
    }
}

std::vector<double> MlpModel::forward_standardized(std::span<const double> z,
                                                   ForwardTrace* trace) const {
    std::vector<double> a(z.begin(), z.end());
    for (std::size_t l = 0; l < layers.size(); ++l) {
        std::vector<double> pre = affine(layers[l], a);
        if (trace) trace->pre.push_back(pre);
        if (l + 1 < layers.size()) {
            for (double& x : pre) x = std::max(0.0, x);
        } else {
            softmax_inplace(pre);
        }
        if (trace) trace->act.push_back(pre);
        a = std::move(pre);
    }
    return a;
}

std::vector<double> MlpModel::forward(std::span<const double> raw) const {
    return forward_standardized(scaler.transform(raw));
}

Terrain MlpModel::predict(std::span<const double> raw) const {
    const auto probs = forward(raw);
    const std::size_t arg = std::max_element(probs.begin(), probs.end()) - probs.begin();
    return classes[arg];
}

std::vector<Terrain> MlpModel::predict(const Matrix& raw) const {
    std::vector<Terrain> out;
    out.reserve(raw.rows());
    for (std::size_t r = 0; r < raw.rows(); ++r) out.push_back(predict(raw.row(r)));
    return out;
}

MlpModel init_model(const MlpConfig& cfg, const Scaler& scaler,
                    std::vector<Terrain> classes, std::mt19937_64& rng) {
    check_config(cfg);
    if (cfg.input_dim == 0) throw ConfigError("mlp: input_dim not set");
    if (classes.size() != cfg.output_dim) {
        throw ConfigError("mlp: output_dim is " + std::to_string(cfg.output_dim) +
                          " but " + std::to_string(classes.size()) +
                          " classes were given");
    }
    MlpModel model;
    model.config = cfg;
    model.scaler = scaler;
    model.classes = std::move(classes);
    std::size_t fan_in = cfg.input_dim;
    for (std::size_t l = 0; l <= cfg.hidden_layers; ++l) {
        const std::size_t fan_out =
            l == cfg.hidden_layers ? cfg.output_dim : cfg.hidden_units;
        Layer layer;
        layer.weights = Matrix(fan_out, fan_in);
        layer.bias.assign(fan_out, 0.0);
        const double limit =
            std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
        std::uniform_real_distribution<double> uniform(-limit, limit);
        for (double& w : layer.weights.data()) w = uniform(rng);
        model.layers.push_back(std::move(layer));
        fan_in = fan_out;
    }
    return model;
}

TrainResult train(const SampleSet& train_set, const SampleSet& eval_set,
                  const MlpConfig& cfg_in) {
    MlpConfig cfg = cfg_in;
    check_config(cfg);
    if (train_set.size() == 0) throw DataError("mlp train: no samples");
    if (train_set.size() < cfg.batch_size) {
        throw DataError("mlp train: need at least one full batch of samples");
    }
    if (cfg.input_dim == 0) {
        cfg.input_dim = train_set.dim();
    } else if (cfg.input_dim != train_set.dim()) {
        throw ConfigError("mlp: input_dim is " + std::to_string(cfg.input_dim) +
                          " but samples have " + std::to_string(train_set.dim()) +
                          " features");
    }
    if (eval_set.dim() != train_set.dim()) {
        throw ShapeError("mlp train: eval set feature count differs");
    }

    const std::vector<Terrain> train_labels = train_set.required_labels();
    const std::vector<Terrain> eval_labels = eval_set.required_labels();
    const std::vector<Terrain> classes = class_set(train_labels);
    if (classes.size() < 2) throw DataError("mlp train: need at least two classes");

    auto target_index = [&](Terrain t) -> std::size_t {
        const auto it = std::find(classes.begin(), classes.end(), t);
        if (it == classes.end()) {
            throw DataError("mlp train: eval label missing from training classes");
        }
        return static_cast<std::size_t>(it - classes.begin());
    };
    std::vector<std::size_t> train_targets;
    train_targets.reserve(train_labels.size());
    for (Terrain t : train_labels) train_targets.push_back(target_index(t));
    std::vector<std::size_t> eval_targets;
    eval_targets.reserve(eval_labels.size());
    for (Terrain t : eval_labels) eval_targets.push_back(target_index(t));

    std::mt19937_64 rng(cfg.seed);
    const Scaler scaler = Scaler::fit(train_set.features);
    const Matrix z_train = scaler.transform(train_set.features);
    const Matrix z_eval = scaler.transform(eval_set.features);

    TrainResult result;
    result.model = init_model(cfg, scaler, classes, rng);
    MlpModel& model = result.model;

    Gradients velocity(model.layers);
    std::vector<std::size_t> order(z_train.rows());
    std::iota(order.begin(), order.end(), 0);

    for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        KahanSum epoch_loss;
        for (std::size_t begin = 0; begin < order.size(); begin += cfg.batch_size) {
            const std::size_t end = std::min(begin + cfg.batch_size, order.size());
            const double batch_n = static_cast<double>(end - begin);
            Gradients grads(model.layers);
            double batch_loss = 0.0;
            for (std::size_t i = begin; i < end; ++i) {
                const std::size_t r = order[i];
                const TrainTrace trace = forward_train(model, z_train.row(r), rng);
                batch_loss += backward_accumulate(model, trace, train_targets[r], grads);
            }
            if (!std::isfinite(batch_loss)) {
                throw ConvergenceError("mlp train: non-finite loss at epoch " +
                                       std::to_string(epoch));
            }
            epoch_loss.add(batch_loss);
            grads.scale(1.0 / batch_n);
            for (std::size_t l = 0; l < model.layers.size(); ++l) {
                auto& w = model.layers[l].weights.data();
                auto& vw = velocity.weights[l].data();
                const auto& gw = grads.weights[l].data();
                for (std::size_t i = 0; i < w.size(); ++i) {
                    vw[i] = cfg.momentum * vw[i] - cfg.learning_rate * gw[i];
                    w[i] += vw[i];
                }
                auto& b = model.layers[l].bias;
                auto& vb = velocity.bias[l];
                const auto& gb = grads.bias[l];
                for (std::size_t i = 0; i < b.size(); ++i) {
                    vb[i] = cfg.momentum * vb[i] - cfg.learning_rate * gb[i];
                    b[i] += vb[i];
                }
            }
        }
        EpochStats stats;
        stats.epoch = epoch;
        stats.train_loss = epoch_loss.value() / static_cast<double>(order.size());
        stats.train_accuracy = evaluate_on(model, z_train, train_targets).accuracy;
        const EvalResult held_out = evaluate_on(model, z_eval, eval_targets);
        stats.eval_loss = held_out.loss;
        stats.eval_accuracy = held_out.accuracy;
        result.curves.push_back(stats);
    }
    return result;
}

double batch_loss_and_gradient(const MlpModel& model, const Matrix& z,
                               std::span<const std::size_t> targets,
                               std::vector<double>* gradient) {
    if (z.rows() != targets.size()) {
        throw ShapeError("mlp gradient: rows and targets differ");
    }
    if (z.rows() == 0) throw DataError("mlp gradient: empty batch");

    Gradients grads(model.layers);
    double total = 0.0;
    for (std::size_t r = 0; r < z.rows(); ++r) {
        // Reuse the training pass with dropout disabled.
        TrainTrace trace;
        std::vector<double> a(z.row(r).begin(), z.row(r).end());
        for (std::size_t l = 0; l < model.layers.size(); ++l) {
            trace.inputs.push_back(a);
            std::vector<double> pre = affine(model.layers[l], a);
            trace.pre.push_back(pre);
            if (l + 1 < model.layers.size()) {
                for (double& x : pre) x = std::max(0.0, x);
                a = std::move(pre);
            } else {
                softmax_inplace(pre);
                trace.probabilities = std::move(pre);
            }
        }
        total += backward_accumulate(model, trace, targets[r], grads);
    }
    const double inv = 1.0 / static_cast<double>(z.rows());
    if (gradient) {
        gradient->clear();
        for (std::size_t l = 0; l < model.layers.size(); ++l) {
            for (double g : grads.weights[l].data()) gradient->push_back(g * inv);
            for (double g : grads.bias[l]) gradient->push_back(g * inv);
        }
    }
    return total * inv;
}

double gradient_check(const MlpModel& model, const Matrix& z,
                      std::span<const std::size_t> targets, double h) {
    std::vector<double> analytic;
    batch_loss_and_gradient(model, z, targets, &analytic);

    MlpModel probe = model;
    std::vector<double*> params;
    for (Layer& layer : probe.layers) {
        for (double& w : layer.weights.data()) params.push_back(&w);
        for (double& b : layer.bias) params.push_back(&b);
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double saved = *params[i];
        *params[i] = saved + h;
        const double up = batch_loss_and_gradient(probe, z, targets, nullptr);
        *params[i] = saved - h;
        const double down = batch_loss_and_gradient(probe, z, targets, nullptr);
        *params[i] = saved;
        const double numeric = (up - down) / (2.0 * h);
        const double denom = std::max(std::abs(analytic[i]) + std::abs(numeric), 1e-4);
        worst = std::max(worst, std::abs(analytic[i] - numeric) / denom);
    }
    return worst;
}

}  // namespace fts::mlp
