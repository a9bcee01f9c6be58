#pragma once

#include <span>
#include <vector>

#include "fts/dataset.hpp"
#include "fts/telemetry.hpp"

namespace fts {

/// Fixed windowing grid. The default non-overlapping 1 s windows make the
/// processed sample count track the traverse duration in seconds.
struct WindowSpec {
    double length = 1.0;  // seconds
    double stride = 1.0;  // seconds
};

/// Which feature families a sample carries. At least one of use_imu /
/// use_fts must be set.
struct FeatureSelection {
    bool use_imu = true;
    bool use_fts = true;
    bool include_fx_over_tz = true;
};

/// The five per-window statistics of one channel slice.
struct WindowStats {
    double mean = 0.0;
    double median = 0.0;
    double min = 0.0;
    double max = 0.0;
    double std = 0.0;  // population (1/N)
};

/// Statistics of a non-empty series. The median of an even-length series is
/// the mean of the two middle order statistics. Throws DataError on an
/// empty series.
WindowStats window_statistics(std::span<const double> values);

/// Division guard for the derived fx/tz channel. The ratio is reported
/// as-is while |tz| >= kRatioEpsilon; below that it saturates to a signed
/// clamp (0 for a zero numerator) so features stay finite.
inline constexpr double kRatioEpsilon = 1e-6;  // N·m
inline constexpr double kRatioClamp = 1e6;

double fx_over_tz(double fx, double tz);

/// Slice the streams into windows over their common time span and compute
/// the per-channel statistics. Windows are half-open [t0, t0 + length); a
/// window is emitted only when every selected stream has at least one point
/// inside it. Feature columns are named `<sensor>_<channel>_<stat>` and
/// ordered lexicographically. Labels follow LabelTrack::label_for_window.
///
/// Preconditions: all streams in the rover frame (StateError), distinct
/// sensors (ConfigError), a non-empty common span (AlignmentError).
SampleSet build_samples(std::span<const TelemetryStream> streams,
                        const LabelTrack& labels, const WindowSpec& spec,
                        const FeatureSelection& selection);

}  // namespace fts
