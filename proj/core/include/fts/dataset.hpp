#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fts/math.hpp"
#include "fts/types.hpp"

namespace fts {

/// One windowed sample: the window start, the feature vector (in the
/// owning set's canonical column order) and the terrain label, if the
/// window was fully inside a labeled interval.
struct WindowSample {
    double t_start = 0.0;
    std::span<const double> features;
    std::optional<Terrain> label;
};

/// A set of windowed samples sharing one feature-name set and order.
struct SampleSet {
    std::vector<std::string> feature_names;       // canonical (lexicographic) order
    Matrix features;                              // n x d
    std::vector<double> window_starts;            // n
    std::vector<std::optional<Terrain>> labels;   // n

    std::size_t size() const { return features.rows(); }
    std::size_t dim() const { return features.cols(); }

    WindowSample sample(std::size_t i) const {
        return {window_starts[i], features.row(i), labels[i]};
    }

    /// Subset of columns whose names start with any of the given prefixes
    /// (e.g. {"imu_"} or {"fts_"}). Column order is preserved.
    SampleSet select_feature_prefixes(std::span<const std::string> prefixes) const;

    /// Rows that carry a label, dropping the rest.
    SampleSet labeled_only() const;

    /// The given rows, in the given order. Indices must be in range.
    SampleSet take(std::span<const std::size_t> rows) const;

    /// Labels of all rows; throws DataError if any row is unlabeled.
    std::vector<Terrain> required_labels() const;
};

/// Samples CSV: header `t_start,label,<features...>`; label is a lowercase
/// terrain name or empty. Values round-trip bit-exactly.
void write_samples_csv(const SampleSet& set, const std::filesystem::path& path);
SampleSet read_samples_csv(const std::filesystem::path& path);

/// Row indices for a stratified train/test split: within each class the
/// rows are shuffled with the seeded generator and round(n * test_fraction)
/// of them go to the test side. Deterministic per seed.
struct SplitIndices {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};

SplitIndices stratified_split(std::span<const Terrain> labels, double test_fraction,
                              std::uint64_t seed);

/// Per-feature z-score standardization, fit on training data only.
/// Features with zero spread map to 0 (their scale is set to 1).
class Scaler {
public:
    static Scaler fit(const Matrix& x);

    std::size_t dim() const { return means_.size(); }
    std::span<const double> means() const { return means_; }
    std::span<const double> scales() const { return scales_; }

    void transform_row(std::span<const double> in, std::span<double> out) const;
    std::vector<double> transform(std::span<const double> row) const;
    Matrix transform(const Matrix& x) const;

    static Scaler from_parameters(std::vector<double> means, std::vector<double> scales);

private:
    std::vector<double> means_;
    std::vector<double> scales_;
};

}  // namespace fts
