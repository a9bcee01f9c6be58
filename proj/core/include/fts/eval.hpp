#pragma once

#include <optional>
#include <span>
#include <vector>

#include "fts/types.hpp"

namespace fts {

/// Row-normalized confusion matrix in percent. Rows are actual classes,
/// columns predicted, both in canonical terrain order. Rows with at least
/// one truth element sum to 100 (up to rounding in the renderer); rows of
/// absent classes stay zero.
struct ConfusionMatrix {
    std::vector<std::vector<double>> rows;   // kTerrainCount x kTerrainCount, percent
    std::vector<std::size_t> row_counts;     // truth count per class
    double accuracy = 0.0;                   // overall fraction correct, [0, 1]
};

/// Tally predictions against truth. Throws DataError on empty or
/// mismatched inputs.
ConfusionMatrix confusion_matrix(std::span<const Terrain> predicted,
                                 std::span<const Terrain> truth);

/// Wall-clock timings of one training run, kept separate from the
/// deterministic outputs.
struct TimingReport {
    double grid_search_seconds = 0.0;   // 0 when no grid search ran
    double train_seconds = 0.0;         // final fit with the chosen parameters
    double inference_seconds = 0.0;     // whole evaluation set
    double inference_per_sample_seconds = 0.0;
};

/// Everything a classification run reports: the confusion matrix of the
/// test split, train/test accuracy, and timings.
struct EvalReport {
    ConfusionMatrix confusion;
    double train_accuracy = 0.0;   // fraction, [0, 1]
    double test_accuracy = 0.0;
    TimingReport timing;
};

}  // namespace fts
