#pragma once

#include <optional>
#include <span>
#include <vector>

#include "fts/telemetry.hpp"
#include "fts/types.hpp"

namespace fts::drawbar {

/// Wheel and mount geometry. The admissible lever band follows from it:
/// a contact patch can sit no closer to the sensor than the axle offset and
/// no farther than the axle offset plus the wheel radius.
struct WheelGeometry {
    double wheel_diameter = 0.15;  // m
    double sensor_to_axle = 0.10;  // m

    double lever_min() const { return sensor_to_axle; }
    double lever_max() const { return sensor_to_axle + 0.5 * wheel_diameter; }
};

/// Longitudinal forces below this are too small for a usable moment ratio.
inline constexpr double kForceEpsilon = 0.5;  // N

/// Lever arm estimate |ty| / |fx|, or nullopt when |fx| < force_epsilon.
std::optional<double> lever_length(double fx, double ty,
                                   double force_epsilon = kForceEpsilon);

struct LeverPoint {
    double t = 0.0;
    double fx = 0.0;
    double ty = 0.0;
    std::optional<double> lever;
    bool valid = false;  // set by filter_by_lever
};

struct LeverSeries {
    SensorPosition wheel = SensorPosition::FL;
    std::vector<LeverPoint> points;
};

/// Lever series of one wheel's force-torque stream. The stream must be in
/// the rover frame and belong to a wheel sensor.
LeverSeries build_lever_series(const TelemetryStream& stream,
                               double force_epsilon = kForceEpsilon);

/// Mark points whose lever estimate lies inside the closed band
/// [lever_min - tolerance, lever_max + tolerance]. Points without a lever
/// estimate stay invalid. Forces are never modified, only flagged.
void filter_by_lever(LeverSeries& series, const WheelGeometry& geometry,
                     double tolerance);

struct RetentionRow {
    SensorPosition wheel = SensorPosition::FL;
    std::size_t kept = 0;
    std::size_t total = 0;   // every sample, including undefined-lever ones
    double percent = 0.0;
};

struct RetentionReport {
    double tolerance = 0.0;
    std::vector<RetentionRow> wheels;  // wheels present, canonical order
    RetentionRow pooled;               // all wheels together
};

/// Per-wheel and pooled retention after filtering. Wheels not present in
/// the input are omitted rather than reported as zero.
RetentionReport retention_report(std::span<const LeverSeries> series,
                                 double tolerance);

/// One report per tolerance: each series is re-filtered against the band
/// widened by that tolerance. The input series are not modified.
std::vector<RetentionReport> retention_reports(std::span<const LeverSeries> series,
                                               const WheelGeometry& geometry,
                                               std::span<const double> tolerances);

struct StableParams {
    double min_duration = 5.0;  // s
    double max_std = 0.01;      // m, population std of the lever estimate
};

struct Interval {
    double t_start = 0.0;
    double t_end = 0.0;
};

/// Greedy scan for stretches where the lever estimate holds still: within
/// each run of consecutive valid points a sliding window grows point by
/// point and shrinks from the left while its lever std exceeds max_std;
/// windows that span at least min_duration are kept. Overlapping or
/// touching windows are merged, so the result is sorted and disjoint.
std::vector<Interval> detect_stable_intervals(const LeverSeries& series,
                                              const StableParams& params);

struct DrawbarEstimate {
    Interval interval;
    double mean_fx = 0.0;
    double std_fx = 0.0;  // population std
    std::size_t count = 0;
};

/// Mean and spread of fx over the valid points inside each interval.
/// Intervals with no valid points are dropped.
std::vector<DrawbarEstimate> drawbar_estimates(const LeverSeries& series,
                                               std::span<const Interval> intervals);

}  // namespace fts::drawbar
