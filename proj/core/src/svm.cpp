#include "fts/svm.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <string>
#include <thread>

#include "fts/errors.hpp"

namespace fts::svm {

namespace {

// Keep a dual coefficient only if it is meaningfully above zero; below this
// the point contributes nothing to the decision function.
constexpr double kAlphaKeep = 1e-12;

// Minimum objective improvement / alpha movement accepted by one SMO step.
constexpr double kStepEps = 1e-12;

std::string shape_text(std::size_t a, std::size_t b) {
    return std::to_string(a) + " vs " + std::to_string(b);
}

}  // namespace

std::string_view kernel_name(KernelKind k) {
    switch (k) {
        case KernelKind::Linear: return "linear";
        case KernelKind::Rbf: return "rbf";
        case KernelKind::Poly: return "poly";
        case KernelKind::Sigmoid: return "sigmoid";
    }
    return "linear";
}

std::optional<KernelKind> kernel_from_name(std::string_view name) {
    if (name == "linear") return KernelKind::Linear;
    if (name == "rbf") return KernelKind::Rbf;
    if (name == "poly") return KernelKind::Poly;
    if (name == "sigmoid") return KernelKind::Sigmoid;
    return std::nullopt;
}

double kernel_eval(const KernelConfig& k, std::span<const double> u,
                   std::span<const double> v) {
    if (u.size() != v.size()) {
        throw ShapeError("kernel_eval: vector sizes differ (" +
                         shape_text(u.size(), v.size()) + ")");
    }
    switch (k.kind) {
        case KernelKind::Linear:
            return dot(u, v);
        case KernelKind::Rbf:
            return std::exp(-k.gamma * squared_distance(u, v));
        case KernelKind::Poly:
            return std::pow(k.gamma * dot(u, v) + k.coef0, k.degree);
        case KernelKind::Sigmoid:
            return std::tanh(k.gamma * dot(u, v) + k.coef0);
    }
    return 0.0;
}

Matrix kernel_matrix(const KernelConfig& k, const Matrix& x) {
    const std::size_t n = x.rows();
    Matrix out(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            const double v = kernel_eval(k, x.row(i), x.row(j));
            out.at(i, j) = v;
            out.at(j, i) = v;
        }
    }
    return out;
}

double dual_objective(const Matrix& kernel, std::span<const int> y,
                      std::span<const double> alpha) {
    const std::size_t n = alpha.size();
    if (kernel.rows() != n || kernel.cols() != n || y.size() != n) {
        throw ShapeError("dual_objective: kernel / label / alpha sizes differ");
    }
    KahanSum linear;
    KahanSum quad;
    for (std::size_t i = 0; i < n; ++i) {
        linear.add(alpha[i]);
        for (std::size_t j = 0; j < n; ++j) {
            quad.add(alpha[i] * alpha[j] * y[i] * y[j] * kernel.at(i, j));
        }
    }
    return linear.value() - 0.5 * quad.value();
}

namespace {

// Pairwise coordinate ascent on the soft-margin dual. The layout follows the
// classic working-set scheme: an outer loop alternating full sweeps with
// sweeps over the non-bound points, and a three-stage second-choice
// heuristic. The fallback scans start at a rotating offset so runs are
// reproducible without an RNG.
struct SmoSolver {
    const Matrix& k;
    std::span<const int> y;
    double c = 1.0;
    double tol = 1e-3;

    std::size_t n = 0;
    std::vector<double> alpha;
    std::vector<double> error;  // f(x_i) - y_i
    double b = 0.0;
    std::size_t rotor = 0;

    SmoSolver(const Matrix& kernel, std::span<const int> labels, double c_in,
              double tol_in)
        : k(kernel), y(labels), c(c_in), tol(tol_in), n(labels.size()),
          alpha(n, 0.0), error(n) {
        for (std::size_t i = 0; i < n; ++i) error[i] = -static_cast<double>(y[i]);
    }

    bool non_bound(std::size_t i) const { return alpha[i] > 0.0 && alpha[i] < c; }

    bool take_step(std::size_t i1, std::size_t i2) {
        if (i1 == i2) return false;
        const double a1 = alpha[i1];
        const double a2 = alpha[i2];
        const double y1 = y[i1];
        const double y2 = y[i2];
        const double e1 = error[i1];
        const double e2 = error[i2];
        const double s = y1 * y2;

        double lo = 0.0;
        double hi = c;
        if (y1 != y2) {
            lo = std::max(0.0, a2 - a1);
            hi = std::min(c, c + a2 - a1);
        } else {
            lo = std::max(0.0, a2 + a1 - c);
            hi = std::min(c, a2 + a1);
        }
        if (lo >= hi) return false;

        const double k11 = k.at(i1, i1);
        const double k12 = k.at(i1, i2);
        const double k22 = k.at(i2, i2);
        const double eta = k11 + k22 - 2.0 * k12;

        double a2new = 0.0;
        if (eta > 0.0) {
            a2new = a2 + y2 * (e1 - e2) / eta;
            a2new = std::clamp(a2new, lo, hi);
        } else {
            // Indefinite or flat direction: evaluate the objective at both
            // clipping bounds and move to the strictly better one.
            const double f1 = y1 * (e1 + b) - a1 * k11 - s * a2 * k12;
            const double f2 = y2 * (e2 + b) - s * a1 * k12 - a2 * k22;
            const double l1 = a1 + s * (a2 - lo);
            const double h1 = a1 + s * (a2 - hi);
            const double obj_lo = l1 * f1 + lo * f2 + 0.5 * l1 * l1 * k11 +
                                  0.5 * lo * lo * k22 + s * lo * l1 * k12;
            const double obj_hi = h1 * f1 + hi * f2 + 0.5 * h1 * h1 * k11 +
                                  0.5 * hi * hi * k22 + s * hi * h1 * k12;
            if (obj_lo < obj_hi - kStepEps) {
                a2new = lo;
            } else if (obj_lo > obj_hi + kStepEps) {
                a2new = hi;
            } else {
                return false;
            }
        }
        if (std::abs(a2new - a2) < kStepEps * (a2new + a2 + kStepEps)) return false;

        double a1new = a1 + s * (a2 - a2new);
        // Guard the companion variable against round-off outside the box.
        if (a1new < 0.0) a1new = 0.0;
        if (a1new > c) a1new = c;

        const double d1 = y1 * (a1new - a1);
        const double d2 = y2 * (a2new - a2);
        const double b1 = b - e1 - d1 * k11 - d2 * k12;
        const double b2 = b - e2 - d1 * k12 - d2 * k22;
        double bnew = 0.0;
        if (a1new > 0.0 && a1new < c) {
            bnew = b1;
        } else if (a2new > 0.0 && a2new < c) {
            bnew = b2;
        } else {
            bnew = 0.5 * (b1 + b2);
        }
        const double db = bnew - b;

        for (std::size_t i = 0; i < n; ++i) {
            error[i] += d1 * k.at(i1, i) + d2 * k.at(i2, i) + db;
        }
        alpha[i1] = a1new;
        alpha[i2] = a2new;
        b = bnew;
        return true;
    }

    bool examine(std::size_t i2) {
        const double a2 = alpha[i2];
        const double r2 = error[i2] * y[i2];
        const bool violates = (r2 < -tol && a2 < c) || (r2 > tol && a2 > 0.0);
        if (!violates) return false;

        // First choice: the non-bound point with the largest |E1 - E2|.
        std::size_t best = n;
        double best_gap = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (!non_bound(i)) continue;
            const double gap = std::abs(error[i] - error[i2]);
            if (gap > best_gap) {
                best_gap = gap;
                best = i;
            }
        }
        if (best < n && take_step(best, i2)) return true;

        // Fallbacks: sweep the non-bound points, then everything, from a
        // rotating start position.
        const std::size_t start = rotor++ % n;
        for (std::size_t off = 0; off < n; ++off) {
            const std::size_t i1 = (start + off) % n;
            if (non_bound(i1) && take_step(i1, i2)) return true;
        }
        for (std::size_t off = 0; off < n; ++off) {
            const std::size_t i1 = (start + off) % n;
            if (take_step(i1, i2)) return true;
        }
        return false;
    }

    SmoResult run(std::size_t max_sweeps) {
        SmoResult out;
        std::size_t changed = 0;
        bool examine_all = true;
        std::size_t sweeps = 0;
        bool converged = true;
        while (changed > 0 || examine_all) {
            if (sweeps >= max_sweeps) {
                converged = false;
                break;
            }
            ++sweeps;
            changed = 0;
            for (std::size_t i = 0; i < n; ++i) {
                if (examine_all || non_bound(i)) changed += examine(i) ? 1 : 0;
            }
            if (examine_all) {
                examine_all = false;
            } else if (changed == 0) {
                examine_all = true;
            }
        }
        for (double& a : alpha) a = std::clamp(a, 0.0, c);
        out.alpha = std::move(alpha);
        out.bias = b;
        out.converged = converged;
        out.sweeps = sweeps;
        return out;
    }
};

void check_svm_config(const SvmConfig& cfg) {
    if (!(cfg.c > 0.0)) throw ConfigError("svm: C must be positive");
    if (!(cfg.tol > 0.0)) throw ConfigError("svm: tol must be positive");
    if (cfg.kernel.kind != KernelKind::Linear && !(cfg.kernel.gamma > 0.0)) {
        throw ConfigError("svm: gamma must be positive");
    }
    if (cfg.kernel.kind == KernelKind::Poly && cfg.kernel.degree < 1) {
        throw ConfigError("svm: poly degree must be at least 1");
    }
}

double accuracy_on(const SvmModel& model, const SampleSet& set) {
    const auto truth = set.required_labels();
    const auto pred = model.predict(set.features);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (pred[i] == truth[i]) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(truth.size());
}

}  // namespace

SmoResult solve_smo(const Matrix& kernel, std::span<const int> y, double c,
                    double tol, std::size_t max_sweeps) {
    const std::size_t n = y.size();
    if (n == 0) throw DataError("solve_smo: no samples");
    if (kernel.rows() != n || kernel.cols() != n) {
        throw ShapeError("solve_smo: kernel matrix is " +
                         shape_text(kernel.rows(), kernel.cols()) + " for " +
                         std::to_string(n) + " labels");
    }
    for (int label : y) {
        if (label != 1 && label != -1) {
            throw DataError("solve_smo: labels must be +1 or -1");
        }
    }
    if (max_sweeps == 0) max_sweeps = 10 * n;
    SmoSolver solver(kernel, y, c, tol);
    return solver.run(max_sweeps);
}

double BinarySvm::decision(const KernelConfig& kernel,
                           std::span<const double> x) const {
    KahanSum sum;
    for (std::size_t i = 0; i < support_vectors.rows(); ++i) {
        sum.add(coefficients[i] * kernel_eval(kernel, support_vectors.row(i), x));
    }
    return sum.value() + bias;
}

BinarySvm train_binary(const Matrix& x, std::span<const int> y,
                       const SvmConfig& cfg) {
    check_svm_config(cfg);
    if (x.rows() != y.size()) {
        throw ShapeError("train_binary: feature rows and labels differ (" +
                         shape_text(x.rows(), y.size()) + ")");
    }
    bool has_pos = false;
    bool has_neg = false;
    for (int label : y) {
        if (label == 1) has_pos = true;
        if (label == -1) has_neg = true;
    }
    if (!has_pos || !has_neg) {
        throw DataError("train_binary: need samples from both classes");
    }

    const Matrix k = kernel_matrix(cfg.kernel, x);
    const SmoResult solved = solve_smo(k, y, cfg.c, cfg.tol, cfg.max_sweeps);

    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < solved.alpha.size(); ++i) {
        if (solved.alpha[i] > kAlphaKeep) kept.push_back(i);
    }
    BinarySvm machine;
    machine.support_vectors = x.take_rows(kept);
    machine.coefficients.reserve(kept.size());
    for (std::size_t i : kept) {
        machine.coefficients.push_back(solved.alpha[i] * y[i]);
    }
    machine.bias = solved.bias;
    machine.converged = solved.converged;
    return machine;
}

bool SvmModel::fully_converged() const {
    return std::all_of(machines.begin(), machines.end(),
                       [](const BinarySvm& m) { return m.converged; });
}

Terrain SvmModel::predict(std::span<const double> raw_features) const {
    std::vector<double> z = scaler.transform(raw_features);
    if (reduction == Reduction::OneVsRest) {
        std::size_t best = 0;
        double best_score = -std::numeric_limits<double>::infinity();
        for (std::size_t m = 0; m < machines.size(); ++m) {
            const double score = machines[m].decision(kernel, z);
            if (score > best_score) {
                best_score = score;
                best = m;
            }
        }
        return classes[best];
    }

    // One-vs-one: majority vote; ties go to the larger summed decision
    // value, then to canonical class order.
    std::vector<std::size_t> votes(classes.size(), 0);
    std::vector<double> scores(classes.size(), 0.0);
    auto class_index = [&](int terrain_index) {
        for (std::size_t i = 0; i < classes.size(); ++i) {
            if (static_cast<int>(classes[i]) == terrain_index) return i;
        }
        throw StateError("svm predict: machine references an unknown class");
    };
    for (const BinarySvm& m : machines) {
        const double f = m.decision(kernel, z);
        const std::size_t a = class_index(m.positive_class);
        const std::size_t b = class_index(m.negative_class);
        scores[a] += f;
        scores[b] -= f;
        if (f > 0.0) {
            ++votes[a];
        } else {
            ++votes[b];
        }
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < classes.size(); ++i) {
        if (votes[i] > votes[best] ||
            (votes[i] == votes[best] && scores[i] > scores[best])) {
            best = i;
        }
    }
    return classes[best];
}

std::vector<Terrain> SvmModel::predict(const Matrix& raw_features) const {
    std::vector<Terrain> out;
    out.reserve(raw_features.rows());
    for (std::size_t r = 0; r < raw_features.rows(); ++r) {
        out.push_back(predict(raw_features.row(r)));
    }
    return out;
}

SvmModel train_multiclass(const SampleSet& labeled, const SvmConfig& cfg) {
    check_svm_config(cfg);
    const std::vector<Terrain> labels = labeled.required_labels();
    if (labels.empty()) throw DataError("svm train: no samples");

    std::vector<Terrain> classes;
    for (Terrain t : kAllTerrains) {
        if (std::find(labels.begin(), labels.end(), t) != labels.end()) {
            classes.push_back(t);
        }
    }
    if (classes.size() < 2) {
        throw DataError("svm train: need at least two classes, got " +
                        std::to_string(classes.size()));
    }

    SvmModel model;
    model.scaler = Scaler::fit(labeled.features);
    model.kernel = cfg.kernel;
    model.reduction = cfg.reduction;
    model.classes = classes;

    const Matrix z = model.scaler.transform(labeled.features);

    if (cfg.reduction == Reduction::OneVsRest) {
        for (Terrain positive : classes) {
            std::vector<int> y(labels.size());
            for (std::size_t i = 0; i < labels.size(); ++i) {
                y[i] = labels[i] == positive ? 1 : -1;
            }
            BinarySvm m = train_binary(z, y, cfg);
            m.positive_class = static_cast<int>(positive);
            m.negative_class = -1;
            model.machines.push_back(std::move(m));
        }
        return model;
    }

    for (std::size_t a = 0; a < classes.size(); ++a) {
        for (std::size_t b = a + 1; b < classes.size(); ++b) {
            std::vector<std::size_t> rows;
            std::vector<int> y;
            for (std::size_t i = 0; i < labels.size(); ++i) {
                if (labels[i] == classes[a]) {
                    rows.push_back(i);
                    y.push_back(1);
                } else if (labels[i] == classes[b]) {
                    rows.push_back(i);
                    y.push_back(-1);
                }
            }
            BinarySvm m = train_binary(z.take_rows(rows), y, cfg);
            m.positive_class = static_cast<int>(classes[a]);
            m.negative_class = static_cast<int>(classes[b]);
            model.machines.push_back(std::move(m));
        }
    }
    return model;
}

GridSearchResult grid_search(const SampleSet& labeled, const GridSpec& grid,
                             const SplitIndices& split, Reduction reduction,
                             unsigned jobs) {
    if (grid.c_values.empty() || grid.gamma_values.empty() || grid.kernels.empty()) {
        throw ConfigError("grid search: empty parameter axis");
    }
    if (split.train.empty() || split.test.empty()) {
        throw DataError("grid search: split leaves an empty side");
    }
    for (std::size_t i : split.train) {
        if (i >= labeled.size()) throw DataError("grid search: train index out of range");
    }
    for (std::size_t i : split.test) {
        if (i >= labeled.size()) throw DataError("grid search: test index out of range");
    }

    const SampleSet train = labeled.take(split.train);
    const SampleSet test = labeled.take(split.test);

    struct Combo {
        KernelKind kernel;
        double c;
        double gamma;
    };
    std::vector<Combo> combos;
    combos.reserve(grid.kernels.size() * grid.c_values.size() *
                   grid.gamma_values.size());
    for (KernelKind kernel : grid.kernels) {
        for (double c : grid.c_values) {
            for (double gamma : grid.gamma_values) {
                combos.push_back({kernel, c, gamma});
            }
        }
    }

    GridSearchResult result;
    result.rows.resize(combos.size());

    auto run_combo = [&](std::size_t i) {
        const Combo& combo = combos[i];
        SvmConfig cfg;
        cfg.c = combo.c;
        cfg.kernel.kind = combo.kernel;
        cfg.kernel.gamma = combo.gamma;
        cfg.reduction = reduction;
        const auto t0 = std::chrono::steady_clock::now();
        const SvmModel model = train_multiclass(train, cfg);
        GridRow row;
        row.kernel = combo.kernel;
        row.c = combo.c;
        row.gamma = combo.gamma;
        row.train_accuracy = accuracy_on(model, train);
        row.test_accuracy = accuracy_on(model, test);
        const auto t1 = std::chrono::steady_clock::now();
        row.seconds = std::chrono::duration<double>(t1 - t0).count();
        result.rows[i] = row;
    };

    if (jobs <= 1) {
        for (std::size_t i = 0; i < combos.size(); ++i) run_combo(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> workers;
        const unsigned count = std::min<unsigned>(jobs, combos.size());
        workers.reserve(count);
        for (unsigned w = 0; w < count; ++w) {
            workers.emplace_back([&] {
                while (true) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= combos.size()) break;
                    run_combo(i);
                }
            });
        }
        for (std::thread& t : workers) t.join();
    }

    // Winner: best test accuracy; ties prefer the simpler kernel
    // (linear < rbf < poly < sigmoid), then the smaller C, then the
    // smaller gamma.
    auto better = [](const GridRow& a, const GridRow& b) {
        if (a.test_accuracy != b.test_accuracy) {
            return a.test_accuracy > b.test_accuracy;
        }
        if (a.kernel != b.kernel) {
            return static_cast<int>(a.kernel) < static_cast<int>(b.kernel);
        }
        if (a.c != b.c) return a.c < b.c;
        return a.gamma < b.gamma;
    };
    std::size_t best = 0;
    for (std::size_t i = 1; i < result.rows.size(); ++i) {
        if (better(result.rows[i], result.rows[best])) best = i;
    }
    result.best.c = result.rows[best].c;
    result.best.kernel.kind = result.rows[best].kernel;
    result.best.kernel.gamma = result.rows[best].gamma;
    result.best.reduction = reduction;
    result.best_test_accuracy = result.rows[best].test_accuracy;
    return result;
}

}  // namespace fts::svm
