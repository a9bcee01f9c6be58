#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fts/types.hpp"

namespace fts {

/// Timestamped multi-channel samples from one sensor. Channels are fixed by
/// the sensor kind: fx,fy,fz,tx,ty,tz [N, N·m] for an FTS, ax,ay,az [m/s²]
/// for the IMU. Immutable by convention once built; every transformation
/// returns a new stream.
struct TelemetryStream {
    SensorId sensor;
    Frame frame = Frame::Raw;
    std::vector<double> timestamps;               // seconds, non-decreasing
    std::vector<std::vector<double>> channels;    // one series per channel name

    static std::span<const std::string_view> channel_names(SensorKind kind);

    std::size_t size() const { return timestamps.size(); }
    std::span<const double> channel(std::string_view name) const;
    std::vector<double>& channel_mut(std::string_view name);

    /// Basic structural validation: channel count and lengths.
    void check() const;
};

/// Canonical CSV ingestion. Column 1 is `t` (seconds, epoch-relative);
/// remaining columns must match the sensor kind's channel names exactly.
/// The returned stream is in the RAW sensor frame.
///
/// Errors: SchemaError on a header mismatch, ParseError on a malformed or
/// non-finite value (message cites the 1-based data row), OrderingError on
/// decreasing timestamps.
TelemetryStream ingest_csv(const std::filesystem::path& path, SensorId sensor);

/// Write the canonical CSV form. Values are emitted in shortest round-trip
/// decimal form, so ingest(write(s)) reproduces every value bit-exactly.
void write_csv(const TelemetryStream& stream, const std::filesystem::path& path);

/// Rotate right-side FTS streams (FR, CR, BR) 180° around z into the common
/// rover frame: fx, fy, tx, ty change sign, z channels are unchanged. Left
/// side and IMU streams pass through. Throws StateError if the stream is
/// already in the rover frame.
TelemetryStream normalize_frame(const TelemetryStream& stream);

struct LabelInterval {
    double t_start = 0.0;
    double t_end = 0.0;
    Terrain terrain = Terrain::Loose;
};

/// Terrain annotation intervals over a traverse. Intervals are half-open
/// [t_start, t_end), kept sorted, and may touch but not overlap.
class LabelTrack {
public:
    LabelTrack() = default;
    explicit LabelTrack(std::vector<LabelInterval> intervals);

    const std::vector<LabelInterval>& intervals() const { return intervals_; }

    /// Terrain whose interval contains the instant t, if any.
    std::optional<Terrain> label_at(double t) const;

    /// Terrain for the window [t0, t1): labeled only if the window lies
    /// fully inside a single interval.
    std::optional<Terrain> label_for_window(double t0, double t1) const;

private:
    std::vector<LabelInterval> intervals_;
};

/// Label CSV: header `t_start,t_end,terrain`, terrain names lowercase.
LabelTrack read_labels_csv(const std::filesystem::path& path);
void write_labels_csv(const LabelTrack& track, const std::filesystem::path& path);

}  // namespace fts
