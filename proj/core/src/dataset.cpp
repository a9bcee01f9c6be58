#include "fts/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>

#include "fts/csv.hpp"
#include "fts/errors.hpp"

namespace fts {

SampleSet SampleSet::select_feature_prefixes(std::span<const std::string> prefixes) const {
    std::vector<std::size_t> cols;
    for (std::size_t c = 0; c < feature_names.size(); ++c) {
        for (const auto& prefix : prefixes) {
            if (feature_names[c].starts_with(prefix)) {
                cols.push_back(c);
                break;
            }
        }
    }
    if (cols.empty()) throw DataError("no feature matches the requested prefixes");

    SampleSet out;
    out.window_starts = window_starts;
    out.labels = labels;
    out.feature_names.reserve(cols.size());
    for (const auto c : cols) out.feature_names.push_back(feature_names[c]);
    out.features = Matrix(size(), cols.size());
    for (std::size_t r = 0; r < size(); ++r) {
        const auto src = features.row(r);
        auto dst = out.features.row(r);
        for (std::size_t i = 0; i < cols.size(); ++i) dst[i] = src[cols[i]];
    }
    return out;
}

SampleSet SampleSet::labeled_only() const {
    std::vector<std::size_t> rows;
    for (std::size_t r = 0; r < size(); ++r) {
        if (labels[r]) rows.push_back(r);
    }
    return take(rows);
}

SampleSet SampleSet::take(std::span<const std::size_t> rows) const {
    for (const auto r : rows) {
        if (r >= size()) throw DataError("sample set: row index out of range");
    }
    SampleSet out;
    out.feature_names = feature_names;
    out.features = features.take_rows(rows);
    out.window_starts.reserve(rows.size());
    out.labels.reserve(rows.size());
    for (const auto r : rows) {
        out.window_starts.push_back(window_starts[r]);
        out.labels.push_back(labels[r]);
    }
    return out;
}

std::vector<Terrain> SampleSet::required_labels() const {
    std::vector<Terrain> out;
    out.reserve(size());
    for (const auto& l : labels) {
        if (!l) throw DataError("sample set contains unlabeled rows");
        out.push_back(*l);
    }
    return out;
}

void write_samples_csv(const SampleSet& set, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open file for writing: " + path.string());
    out << "t_start,label";
    for (const auto& name : set.feature_names) out << ',' << name;
    out << '\n';
    for (std::size_t r = 0; r < set.size(); ++r) {
        out << csv::format_double(set.window_starts[r]) << ',';
        if (set.labels[r]) out << terrain_name(*set.labels[r]);
        for (const double v : set.features.row(r)) out << ',' << csv::format_double(v);
        out << '\n';
    }
    if (!out) throw DataError("write failed: " + path.string());
}

SampleSet read_samples_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open file: " + path.string());

    std::string line;
    if (!std::getline(in, line))
        throw SchemaError("empty samples file: " + path.string());
    const auto header = csv::split(line);
    if (header.size() < 3 || header[0] != "t_start" || header[1] != "label")
        throw SchemaError("samples header must start with 't_start,label' in " +
                          path.string());

    SampleSet set;
    for (std::size_t i = 2; i < header.size(); ++i)
        set.feature_names.emplace_back(header[i]);
    const std::size_t dim = set.feature_names.size();

    std::vector<double> values;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        ++row;
        const auto fields = csv::split(line);
        if (fields.size() != dim + 2)
            throw ParseError("wrong field count at samples row " + std::to_string(row) +
                             " in " + path.string());
        const std::string where = path.string() + ", row " + std::to_string(row);
        set.window_starts.push_back(csv::parse_double(fields[0], "t_start, " + where));
        if (fields[1].empty()) {
            set.labels.push_back(std::nullopt);
        } else {
            const auto terrain = terrain_from_name(fields[1]);
            if (!terrain)
                throw ParseError("unknown label '" + std::string(fields[1]) + "' at " +
                                 where);
            set.labels.push_back(*terrain);
        }
        for (std::size_t c = 0; c < dim; ++c) {
            const double v = csv::parse_double(fields[c + 2], set.feature_names[c] +
                                                              ", " + where);
            if (!std::isfinite(v))
                throw ParseError("non-finite feature value at " + where);
            values.push_back(v);
        }
    }

    set.features = Matrix(row, dim);
    set.features.data() = std::move(values);
    return set;
}

SplitIndices stratified_split(std::span<const Terrain> labels, double test_fraction,
                              std::uint64_t seed) {
    if (test_fraction < 0.0 || test_fraction >= 1.0)
        throw ConfigError("test fraction must be in [0, 1)");

    std::vector<std::vector<std::size_t>> per_class(kTerrainCount);
    for (std::size_t i = 0; i < labels.size(); ++i)
        per_class[static_cast<std::size_t>(labels[i])].push_back(i);

    std::mt19937_64 rng(seed);
    SplitIndices split;
    for (auto& rows : per_class) {
        if (rows.empty()) continue;
        std::shuffle(rows.begin(), rows.end(), rng);
        const auto n_test = static_cast<std::size_t>(
            std::floor(static_cast<double>(rows.size()) * test_fraction + 0.5));
        for (std::size_t i = 0; i < rows.size(); ++i) {
            (i < n_test ? split.test : split.train).push_back(rows[i]);
        }
    }
    std::sort(split.train.begin(), split.train.end());
    std::sort(split.test.begin(), split.test.end());
    return split;
}

Scaler Scaler::fit(const Matrix& x) {
    if (x.rows() == 0) throw DataError("cannot fit scaler on an empty matrix");
    Scaler s;
    s.means_.resize(x.cols());
    s.scales_.resize(x.cols());
    std::vector<double> column(x.rows());
    for (std::size_t c = 0; c < x.cols(); ++c) {
        for (std::size_t r = 0; r < x.rows(); ++r) column[r] = x.at(r, c);
        s.means_[c] = mean(column);
        const double sd = population_std(column);
        s.scales_[c] = sd > 0.0 ? sd : 1.0;
    }
    return s;
}

void Scaler::transform_row(std::span<const double> in, std::span<double> out) const {
    if (in.size() != means_.size() || out.size() != means_.size())
        throw ShapeError("scaler dimension mismatch");
    for (std::size_t c = 0; c < in.size(); ++c)
        out[c] = (in[c] - means_[c]) / scales_[c];
}

std::vector<double> Scaler::transform(std::span<const double> row) const {
    std::vector<double> out(row.size());
    transform_row(row, out);
    return out;
}

Matrix Scaler::transform(const Matrix& x) const {
    if (x.cols() != means_.size()) throw ShapeError("scaler dimension mismatch");
    Matrix out(x.rows(), x.cols());
    for (std::size_t r = 0; r < x.rows(); ++r) transform_row(x.row(r), out.row(r));
    return out;
}

Scaler Scaler::from_parameters(std::vector<double> means, std::vector<double> scales) {
    if (means.size() != scales.size())
        throw ShapeError("scaler parameter length mismatch");
    Scaler s;
    s.means_ = std::move(means);
    s.scales_ = std::move(scales);
    return s;
}

}  // namespace fts
