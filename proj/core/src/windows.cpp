#include "fts/windows.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "fts/errors.hpp"
#include "fts/math.hpp"

namespace fts {

namespace {

constexpr double kTimeEps = 1e-9;

// One feature column before the stat suffix fan-out: either a plain channel
// of a stream or the derived fx/tz ratio of an FTS stream.
struct ChannelRef {
    std::string name;          // e.g. "fts_fl_fx"
    std::size_t stream = 0;
    int channel = -1;          // index into stream.channels; -1 = derived ratio
};

constexpr std::array<std::string_view, 5> kStatNames = {"mean", "median", "min",
                                                        "max", "std"};

// One emitted feature: a column and one of its five statistics.
struct FeatureRef {
    std::string name;          // e.g. "fts_fl_fx_mean"
    std::size_t column = 0;    // index into the column list
    std::size_t stat = 0;      // index into kStatNames
};

double stat_value(const WindowStats& s, std::size_t stat) {
    switch (stat) {
        case 0: return s.mean;
        case 1: return s.median;
        case 2: return s.min;
        case 3: return s.max;
        default: return s.std;
    }
}

}  // namespace

WindowStats window_statistics(std::span<const double> values) {
    if (values.empty()) throw DataError("empty window");

    WindowStats stats;
    stats.mean = mean(values);
    stats.std = population_std(values);

    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    stats.min = sorted.front();
    stats.max = sorted.back();
    const std::size_t n = sorted.size();
    stats.median = (n % 2 == 1) ? sorted[n / 2]
                                : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
    return stats;
}

double fx_over_tz(double fx, double tz) {
    if (std::abs(tz) >= kRatioEpsilon) return fx / tz;
    if (fx == 0.0) return 0.0;
    const double sign = (fx > 0.0) == (tz >= 0.0) ? 1.0 : -1.0;
    return sign * kRatioClamp;
}

SampleSet build_samples(std::span<const TelemetryStream> streams,
                        const LabelTrack& labels, const WindowSpec& spec,
                        const FeatureSelection& selection) {
    if (spec.length <= 0.0 || spec.stride <= 0.0)
        throw ConfigError("window length and stride must be positive");
    if (!selection.use_imu && !selection.use_fts)
        throw ConfigError("feature selection must enable IMU or FTS features");

    // Pick the streams the selection asks for and check preconditions.
    std::vector<std::size_t> selected;
    for (std::size_t i = 0; i < streams.size(); ++i) {
        const auto& s = streams[i];
        s.check();
        const bool wanted = (s.sensor.kind == SensorKind::Imu && selection.use_imu) ||
                            (s.sensor.kind == SensorKind::Fts && selection.use_fts);
        if (!wanted) continue;
        if (s.frame != Frame::Rover)
            throw StateError("stream " + s.sensor.name() +
                             " must be normalized to the rover frame first");
        if (s.size() == 0)
            throw AlignmentError("stream " + s.sensor.name() + " is empty");
        for (const auto j : selected) {
            if (streams[j].sensor == s.sensor)
                throw ConfigError("duplicate sensor " + s.sensor.name());
        }
        selected.push_back(i);
    }
    if (selection.use_imu &&
        std::none_of(selected.begin(), selected.end(), [&](std::size_t i) {
            return streams[i].sensor.kind == SensorKind::Imu;
        }))
        throw ConfigError("IMU features requested but no IMU stream given");
    if (selection.use_fts &&
        std::none_of(selected.begin(), selected.end(), [&](std::size_t i) {
            return streams[i].sensor.kind == SensorKind::Fts;
        }))
        throw ConfigError("FTS features requested but no FTS stream given");

    // Common span of the selected streams.
    double span_start = -std::numeric_limits<double>::infinity();
    double span_end = std::numeric_limits<double>::infinity();
    for (const auto i : selected) {
        span_start = std::max(span_start, streams[i].timestamps.front());
        span_end = std::min(span_end, streams[i].timestamps.back());
    }
    if (!(span_start < span_end))
        throw AlignmentError("streams share no common time span");

    // Columns in canonical (lexicographic) name order.
    std::vector<ChannelRef> columns;
    for (const auto i : selected) {
        const auto& s = streams[i];
        const auto names = TelemetryStream::channel_names(s.sensor.kind);
        for (std::size_t c = 0; c < names.size(); ++c) {
            columns.push_back({s.sensor.name() + "_" + std::string(names[c]), i,
                               static_cast<int>(c)});
        }
        if (s.sensor.kind == SensorKind::Fts && selection.include_fx_over_tz)
            columns.push_back({s.sensor.name() + "_fx_over_tz", i, -1});
    }
    std::sort(columns.begin(), columns.end(),
              [](const ChannelRef& a, const ChannelRef& b) { return a.name < b.name; });

    // Stat suffixes interleave under lexicographic order (for example
    // "..._fx_std" sorts after every "..._fx_over_tz_*" name), so the
    // flattened feature list is sorted as a whole, not column by column.
    std::vector<FeatureRef> features;
    features.reserve(columns.size() * kStatNames.size());
    for (std::size_t c = 0; c < columns.size(); ++c) {
        for (std::size_t s = 0; s < kStatNames.size(); ++s)
            features.push_back(
                {columns[c].name + "_" + std::string(kStatNames[s]), c, s});
    }
    std::sort(features.begin(), features.end(),
              [](const FeatureRef& a, const FeatureRef& b) { return a.name < b.name; });

    SampleSet set;
    set.feature_names.reserve(features.size());
    for (const auto& f : features) set.feature_names.push_back(f.name);

    std::vector<double> values;        // row-major feature values
    std::vector<double> slice;         // scratch for derived ratios
    std::vector<WindowStats> stats(columns.size());

    for (std::size_t k = 0;; ++k) {
        const double t0 = span_start + static_cast<double>(k) * spec.stride;
        if (t0 + spec.length > span_end + kTimeEps) break;
        const double t1 = t0 + spec.length;

        // Locate [t0, t1) in every selected stream; skip the window if any
        // selected stream has no point inside it.
        bool complete = true;
        std::vector<std::pair<std::size_t, std::size_t>> ranges(streams.size());
        for (const auto i : selected) {
            const auto& ts = streams[i].timestamps;
            const auto lo = std::lower_bound(ts.begin(), ts.end(), t0) - ts.begin();
            const auto hi = std::lower_bound(ts.begin(), ts.end(), t1) - ts.begin();
            if (lo == hi) {
                complete = false;
                break;
            }
            ranges[i] = {static_cast<std::size_t>(lo), static_cast<std::size_t>(hi)};
        }
        if (!complete) continue;

        for (std::size_t c = 0; c < columns.size(); ++c) {
            const auto& col = columns[c];
            const auto& s = streams[col.stream];
            const auto [lo, hi] = ranges[col.stream];
            if (col.channel >= 0) {
                const auto& series = s.channels[static_cast<std::size_t>(col.channel)];
                stats[c] = window_statistics({series.data() + lo, hi - lo});
            } else {
                const auto fx = s.channel("fx");
                const auto tz = s.channel("tz");
                slice.clear();
                for (std::size_t p = lo; p < hi; ++p)
                    slice.push_back(fx_over_tz(fx[p], tz[p]));
                stats[c] = window_statistics(slice);
            }
        }
        for (const auto& f : features)
            values.push_back(stat_value(stats[f.column], f.stat));
        set.window_starts.push_back(t0);
        set.labels.push_back(labels.label_for_window(t0, t1));
    }

    set.features = Matrix(set.window_starts.size(), set.feature_names.size());
    set.features.data() = std::move(values);
    return set;
}

}  // namespace fts
