#include "fts/telemetry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>

#include "fts/csv.hpp"
#include "fts/errors.hpp"

namespace fts {

namespace {

constexpr std::array<std::string_view, 6> kFtsChannels = {"fx", "fy", "fz",
                                                          "tx", "ty", "tz"};
constexpr std::array<std::string_view, 3> kImuChannels = {"ax", "ay", "az"};

std::ifstream open_for_read(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open file: " + path.string());
    return in;
}

}  // namespace

std::span<const std::string_view> TelemetryStream::channel_names(SensorKind kind) {
    if (kind == SensorKind::Fts) return kFtsChannels;
    return kImuChannels;
}

std::span<const double> TelemetryStream::channel(std::string_view name) const {
    const auto names = channel_names(sensor.kind);
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i] == name) return channels[i];
    }
    throw SchemaError("stream " + sensor.name() + " has no channel '" +
                      std::string(name) + "'");
}

std::vector<double>& TelemetryStream::channel_mut(std::string_view name) {
    const auto names = channel_names(sensor.kind);
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i] == name) return channels[i];
    }
    throw SchemaError("stream " + sensor.name() + " has no channel '" +
                      std::string(name) + "'");
}

void TelemetryStream::check() const {
    const auto names = channel_names(sensor.kind);
    if (channels.size() != names.size())
        throw SchemaError("stream " + sensor.name() + ": wrong channel count");
    for (const auto& series : channels) {
        if (series.size() != timestamps.size())
            throw SchemaError("stream " + sensor.name() +
                              ": channel length differs from timestamp length");
    }
}

TelemetryStream ingest_csv(const std::filesystem::path& path, SensorId sensor) {
    std::ifstream in = open_for_read(path);
    const auto names = TelemetryStream::channel_names(sensor.kind);

    std::string line;
    if (!std::getline(in, line))
        throw SchemaError("empty file, header row required: " + path.string());

    const auto header = csv::split(line);
    if (header.size() != names.size() + 1 || header[0] != "t") {
        throw SchemaError("header mismatch in " + path.string() +
                          ": expected 't," + [&] {
                              std::string s;
                              for (std::size_t i = 0; i < names.size(); ++i) {
                                  if (i) s += ',';
                                  s += names[i];
                              }
                              return s;
                          }() + "', got '" + line + "'");
    }
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (header[i + 1] != names[i])
            throw SchemaError("unknown column '" + std::string(header[i + 1]) +
                              "' in " + path.string());
    }

    TelemetryStream stream;
    stream.sensor = sensor;
    stream.frame = Frame::Raw;
    stream.channels.resize(names.size());

    std::size_t row = 0;  // 1-based data row, header excluded
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") {
            // A blank trailing line is fine; a blank line mid-file is not.
            if (in.peek() != EOF)
                throw ParseError("blank line at data row " + std::to_string(row + 1) +
                                 " in " + path.string());
            break;
        }
        ++row;
        const auto fields = csv::split(line);
        if (fields.size() != names.size() + 1)
            throw ParseError("wrong field count at data row " + std::to_string(row) +
                             " in " + path.string());

        const std::string where = path.string() + ", row " + std::to_string(row);
        const double t = csv::parse_double(fields[0], "column t, " + where);
        if (!std::isfinite(t))
            throw ParseError("non-finite timestamp at row " + std::to_string(row) +
                             " in " + path.string());
        if (!stream.timestamps.empty() && t < stream.timestamps.back())
            throw OrderingError("timestamps decrease at row " + std::to_string(row) +
                                " in " + path.string());
        stream.timestamps.push_back(t);

        for (std::size_t i = 0; i < names.size(); ++i) {
            const double v = csv::parse_double(
                fields[i + 1], "column " + std::string(names[i]) + ", " + where);
            if (!std::isfinite(v))
                throw ParseError("non-finite value in column " + std::string(names[i]) +
                                 " at row " + std::to_string(row) + " in " +
                                 path.string());
            stream.channels[i].push_back(v);
        }
    }

    stream.check();
    return stream;
}

void write_csv(const TelemetryStream& stream, const std::filesystem::path& path) {
    stream.check();
    std::ofstream out(path);
    if (!out) throw DataError("cannot open file for writing: " + path.string());

    const auto names = TelemetryStream::channel_names(stream.sensor.kind);
    out << "t";
    for (const auto name : names) out << ',' << name;
    out << '\n';
    for (std::size_t r = 0; r < stream.size(); ++r) {
        out << csv::format_double(stream.timestamps[r]);
        for (std::size_t c = 0; c < names.size(); ++c)
            out << ',' << csv::format_double(stream.channels[c][r]);
        out << '\n';
    }
    if (!out) throw DataError("write failed: " + path.string());
}

TelemetryStream normalize_frame(const TelemetryStream& stream) {
    if (stream.frame == Frame::Rover)
        throw StateError("stream " + stream.sensor.name() +
                         " is already in the rover frame");

    TelemetryStream out = stream;
    out.frame = Frame::Rover;
    if (stream.sensor.kind == SensorKind::Fts && stream.sensor.is_right_side()) {
        for (const std::string_view name : {"fx", "fy", "tx", "ty"}) {
            for (double& v : out.channel_mut(name)) v = -v;
        }
    }
    return out;
}

LabelTrack::LabelTrack(std::vector<LabelInterval> intervals)
    : intervals_(std::move(intervals)) {
    std::sort(intervals_.begin(), intervals_.end(),
              [](const LabelInterval& a, const LabelInterval& b) {
                  return a.t_start < b.t_start;
              });
    for (std::size_t i = 0; i < intervals_.size(); ++i) {
        const auto& iv = intervals_[i];
        if (!(iv.t_start < iv.t_end))
            throw DataError("label interval must satisfy t_start < t_end");
        if (i > 0 && iv.t_start < intervals_[i - 1].t_end)
            throw DataError("label intervals overlap");
    }
}

std::optional<Terrain> LabelTrack::label_at(double t) const {
    // Half-open intervals: touching boundaries map to the later interval.
    auto it = std::upper_bound(intervals_.begin(), intervals_.end(), t,
                               [](double v, const LabelInterval& iv) {
                                   return v < iv.t_start;
                               });
    if (it == intervals_.begin()) return std::nullopt;
    --it;
    if (t >= it->t_start && t < it->t_end) return it->terrain;
    return std::nullopt;
}

std::optional<Terrain> LabelTrack::label_for_window(double t0, double t1) const {
    for (const auto& iv : intervals_) {
        if (t0 >= iv.t_start && t1 <= iv.t_end) return iv.terrain;
    }
    return std::nullopt;
}

LabelTrack read_labels_csv(const std::filesystem::path& path) {
    std::ifstream in = open_for_read(path);
    std::string line;
    if (!std::getline(in, line))
        throw SchemaError("empty label file: " + path.string());
    {
        const auto header = csv::split(line);
        if (header.size() != 3 || header[0] != "t_start" || header[1] != "t_end" ||
            header[2] != "terrain")
            throw SchemaError("label header must be 't_start,t_end,terrain' in " +
                              path.string());
    }

    std::vector<LabelInterval> intervals;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        ++row;
        const auto fields = csv::split(line);
        if (fields.size() != 3)
            throw ParseError("wrong field count at label row " + std::to_string(row) +
                             " in " + path.string());
        LabelInterval iv;
        const std::string where = path.string() + ", row " + std::to_string(row);
        iv.t_start = csv::parse_double(fields[0], "t_start, " + where);
        iv.t_end = csv::parse_double(fields[1], "t_end, " + where);
        const auto terrain = terrain_from_name(fields[2]);
        if (!terrain)
            throw ParseError("unknown terrain '" + std::string(fields[2]) +
                             "' at label row " + std::to_string(row) + " in " +
                             path.string());
        iv.terrain = *terrain;
        intervals.push_back(iv);
    }
    return LabelTrack(std::move(intervals));
}

void write_labels_csv(const LabelTrack& track, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open file for writing: " + path.string());
    out << "t_start,t_end,terrain\n";
    for (const auto& iv : track.intervals()) {
        out << csv::format_double(iv.t_start) << ',' << csv::format_double(iv.t_end)
            << ',' << terrain_name(iv.terrain) << '\n';
    }
    if (!out) throw DataError("write failed: " + path.string());
}

}  // namespace fts
