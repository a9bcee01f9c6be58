#include "fts/drawbar.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fts/errors.hpp"
#include "fts/math.hpp"

namespace fts::drawbar {

namespace {

void check_geometry(const WheelGeometry& g) {
    if (!(g.wheel_diameter > 0.0) || !(g.sensor_to_axle > 0.0)) {
        throw ConfigError("wheel geometry: dimensions must be positive");
    }
}

}  // namespace

std::optional<double> lever_length(double fx, double ty, double force_epsilon) {
    if (std::abs(fx) < force_epsilon) return std::nullopt;
    return std::abs(ty) / std::abs(fx);
}

LeverSeries build_lever_series(const TelemetryStream& stream, double force_epsilon) {
    if (stream.sensor.kind != SensorKind::Fts) {
        throw DataError("lever series: stream " + stream.sensor.name() +
                        " is not a force-torque stream");
    }
    if (stream.sensor.position == SensorPosition::Chassis) {
        throw DataError("lever series: stream is not attached to a wheel");
    }
    if (stream.frame != Frame::Rover) {
        throw StateError("lever series: stream " + stream.sensor.name() +
                         " is not in the rover frame");
    }
    if (!(force_epsilon > 0.0)) {
        throw ConfigError("lever series: force epsilon must be positive");
    }
    const auto fx = stream.channel("fx");
    const auto ty = stream.channel("ty");
    LeverSeries series;
    series.wheel = stream.sensor.position;
    series.points.reserve(stream.size());
    for (std::size_t i = 0; i < stream.size(); ++i) {
        LeverPoint p;
        p.t = stream.timestamps[i];
        p.fx = fx[i];
        p.ty = ty[i];
        p.lever = lever_length(fx[i], ty[i], force_epsilon);
        series.points.push_back(p);
    }
    return series;
}

void filter_by_lever(LeverSeries& series, const WheelGeometry& geometry,
                     double tolerance) {
    check_geometry(geometry);
    if (tolerance < 0.0) throw ConfigError("lever filter: tolerance must be >= 0");
    const double lo = geometry.lever_min() - tolerance;
    const double hi = geometry.lever_max() + tolerance;
    for (LeverPoint& p : series.points) {
        p.valid = p.lever.has_value() && *p.lever >= lo && *p.lever <= hi;
    }
}

RetentionReport retention_report(std::span<const LeverSeries> series,
                                 double tolerance) {
    RetentionReport report;
    report.tolerance = tolerance;
    for (SensorPosition wheel : kWheelPositions) {
        for (const LeverSeries& s : series) {
            if (s.wheel != wheel) continue;
            // An empty series carries no evidence; report the wheel as
            // absent instead of a meaningless 0%.
            if (s.points.empty()) continue;
            RetentionRow row;
            row.wheel = wheel;
            row.total = s.points.size();
            for (const LeverPoint& p : s.points) {
                if (p.valid) ++row.kept;
            }
            row.percent = row.total == 0
                              ? 0.0
                              : 100.0 * static_cast<double>(row.kept) /
                                    static_cast<double>(row.total);
            report.wheels.push_back(row);
            report.pooled.kept += row.kept;
            report.pooled.total += row.total;
        }
    }
    report.pooled.percent =
        report.pooled.total == 0
            ? 0.0
            : 100.0 * static_cast<double>(report.pooled.kept) /
                  static_cast<double>(report.pooled.total);
    return report;
}

std::vector<RetentionReport> retention_reports(std::span<const LeverSeries> series,
                                               const WheelGeometry& geometry,
                                               std::span<const double> tolerances) {
    std::vector<LeverSeries> scratch(series.begin(), series.end());
    std::vector<RetentionReport> out;
    out.reserve(tolerances.size());
    for (double tol : tolerances) {
        for (LeverSeries& s : scratch) filter_by_lever(s, geometry, tol);
        out.push_back(retention_report(scratch, tol));
    }
    return out;
}

std::vector<Interval> detect_stable_intervals(const LeverSeries& series,
                                              const StableParams& params) {
    if (!(params.min_duration > 0.0)) {
        throw ConfigError("stable intervals: min_duration must be positive");
    }
    if (!(params.max_std >= 0.0)) {
        throw ConfigError("stable intervals: max_std must be >= 0");
    }

    std::vector<Interval> candidates;
    const auto& pts = series.points;
    std::size_t run_start = 0;
    while (run_start < pts.size()) {
        if (!pts[run_start].valid) {
            ++run_start;
            continue;
        }
        std::size_t run_end = run_start;  // exclusive
        while (run_end < pts.size() && pts[run_end].valid) ++run_end;

        // Two-pointer sweep inside the run. Running first and second
        // moments give the window std in O(1) per move.
        double sum = 0.0;
        double sumsq = 0.0;
        std::size_t lo = run_start;
        auto window_std = [&](std::size_t n) {
            const double m = sum / static_cast<double>(n);
            const double var = sumsq / static_cast<double>(n) - m * m;
            return std::sqrt(std::max(var, 0.0));
        };
        for (std::size_t hi = run_start; hi < run_end; ++hi) {
            const double lever = *pts[hi].lever;
            sum += lever;
            sumsq += lever * lever;
            while (lo < hi && window_std(hi - lo + 1) > params.max_std) {
                const double out = *pts[lo].lever;
                sum -= out;
                sumsq -= out * out;
                ++lo;
            }
            if (pts[hi].t - pts[lo].t >= params.min_duration) {
                candidates.push_back({pts[lo].t, pts[hi].t});
            }
        }
        run_start = run_end;
    }

    // Merge overlapping or touching windows.
    std::vector<Interval> merged;
    for (const Interval& c : candidates) {
        if (!merged.empty() && c.t_start <= merged.back().t_end) {
            merged.back().t_end = std::max(merged.back().t_end, c.t_end);
        } else {
            merged.push_back(c);
        }
    }
    return merged;
}

std::vector<DrawbarEstimate> drawbar_estimates(const LeverSeries& series,
                                               std::span<const Interval> intervals) {
    std::vector<DrawbarEstimate> out;
    for (const Interval& iv : intervals) {
        std::vector<double> forces;
        for (const LeverPoint& p : series.points) {
            if (p.valid && p.t >= iv.t_start && p.t <= iv.t_end) {
                forces.push_back(p.fx);
            }
        }
        if (forces.empty()) continue;
        DrawbarEstimate est;
        est.interval = iv;
        est.mean_fx = mean(forces);
        est.std_fx = population_std(forces);
        est.count = forces.size();
        out.push_back(est);
    }
    return out;
}

}  // namespace fts::drawbar
