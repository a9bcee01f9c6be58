#include "fts/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "fts/errors.hpp"

namespace fts::synth {

namespace {

// Impact rates are calibrated at this commanded speed; faster driving hits
// proportionally more obstacles.
constexpr double kNominalSpeed = 0.03;  // m/s

constexpr double kGravity = 9.81;  // m/s^2

struct ImpactEvent {
    double t = 0.0;
    double amplitude = 0.0;
    double duration = 0.05;
};

// Decaying half-sine, zero outside [0, duration].
double impact_shape(double dt, double duration) {
    if (dt < 0.0 || dt > duration) return 0.0;
    const double u = dt / duration;
    return std::sin(3.14159265358979323846 * u) * std::exp(-3.0 * u);
}

struct SegmentSpan {
    double t_start = 0.0;
    double t_end = 0.0;
    Terrain terrain = Terrain::Loose;
    double speed = 0.0;
};

void check_spec(const ScenarioSpec& spec) {
    if (spec.segments.empty()) throw ConfigError("synth: no segments");
    for (const Segment& s : spec.segments) {
        if (!(s.duration > 0.0)) {
            throw ConfigError("synth: segment duration must be positive");
        }
    }
    if (!(spec.fts_rate > 0.0) || !(spec.imu_rate > 0.0)) {
        throw ConfigError("synth: sample rates must be positive");
    }
    if (!(spec.speed_min > 0.0) || spec.speed_max < spec.speed_min) {
        throw ConfigError("synth: speed range must satisfy 0 < min <= max");
    }
    if (!(spec.lever_true > 0.0)) {
        throw ConfigError("synth: lever_true must be positive");
    }
}

void check_profiles(std::span<const TerrainProfile> profiles) {
    if (profiles.size() != kTerrainCount) {
        throw ConfigError("synth: need one profile per terrain, got " +
                          std::to_string(profiles.size()));
    }
    for (const TerrainProfile& p : profiles) {
        const double spreads[] = {p.fx_std, p.fy_std, p.fz_std,  p.tx_std,
                                  p.tz_std, p.ty_noise_std, p.ax_std,
                                  p.ay_std, p.az_std};
        for (double s : spreads) {
            if (s < 0.0) throw ConfigError("synth: negative noise spread");
        }
        if (p.impact_rate < 0.0 || p.impact_amplitude < 0.0 ||
            !(p.impact_duration > 0.0)) {
            throw ConfigError("synth: bad impact parameters");
        }
    }
}

const SegmentSpan& segment_at(const std::vector<SegmentSpan>& spans, double t,
                              std::size_t& cursor) {
    while (cursor + 1 < spans.size() && t >= spans[cursor].t_end) ++cursor;
    return spans[cursor];
}

TelemetryStream make_fts_stream(SensorPosition wheel,
                                const std::vector<SegmentSpan>& spans,
                                const ScenarioSpec& spec,
                                std::span<const TerrainProfile> profiles,
                                std::uint64_t stream_seed) {
    TelemetryStream stream;
    stream.sensor = SensorId::fts(wheel);
    stream.frame = Frame::Raw;
    stream.channels.assign(6, {});

    std::mt19937_64 rng(stream_seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> phase_dist(0.0, 1.0 / spec.fts_rate);

    const double total = spans.back().t_end;
    const double phase = phase_dist(rng);
    const bool flip = stream.sensor.is_right_side();
    std::size_t cursor = 0;
    for (double t = phase; t < total; t += 1.0 / spec.fts_rate) {
        const SegmentSpan& seg = segment_at(spans, t, cursor);
        const TerrainProfile& p = profiles[static_cast<std::size_t>(seg.terrain)];
        // Rover-frame samples; draw order is part of the determinism
        // contract for a given seed.
        const double fx = p.fx_mean + p.fx_std * gauss(rng);
        const double fy = p.fy_mean + p.fy_std * gauss(rng);
        const double fz = p.fz_mean + p.fz_std * gauss(rng);
        const double tx = p.tx_mean + p.tx_std * gauss(rng);
        const double ty = fx * spec.lever_true + p.ty_noise_std * gauss(rng);
        const double tz = p.tz_mean + p.tz_std * gauss(rng);
        const double sign = flip ? -1.0 : 1.0;
        stream.timestamps.push_back(t);
        stream.channels[0].push_back(sign * fx);
        stream.channels[1].push_back(sign * fy);
        stream.channels[2].push_back(fz);
        stream.channels[3].push_back(sign * tx);
        stream.channels[4].push_back(sign * ty);
        stream.channels[5].push_back(tz);
    }
    return stream;
}

TelemetryStream make_imu_stream(const std::vector<SegmentSpan>& spans,
                                const ScenarioSpec& spec,
                                std::span<const TerrainProfile> profiles,
                                std::uint64_t stream_seed) {
    TelemetryStream stream;
    stream.sensor = SensorId::imu();
    stream.frame = Frame::Raw;
    stream.channels.assign(3, {});

    std::mt19937_64 rng(stream_seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    // Impact arrivals first, segment by segment, so the event list does not
    // depend on the sampling rate.
    std::vector<ImpactEvent> events;
    for (const SegmentSpan& seg : spans) {
        const TerrainProfile& p = profiles[static_cast<std::size_t>(seg.terrain)];
        const double rate = p.impact_rate * (seg.speed / kNominalSpeed);
        if (rate <= 0.0 || p.impact_amplitude <= 0.0) continue;
        std::exponential_distribution<double> wait(rate);
        double t = seg.t_start + wait(rng);
        while (t < seg.t_end) {
            // Half to double the nominal peak, varied per event.
            const double amp = p.impact_amplitude * (0.5 + 1.5 * unit(rng));
            events.push_back({t, amp, p.impact_duration});
            t += wait(rng);
        }
    }

    const double total = spans.back().t_end;
    const double phase =
        std::uniform_real_distribution<double>(0.0, 1.0 / spec.imu_rate)(rng);
    std::size_t cursor = 0;
    std::size_t first_event = 0;
    for (double t = phase; t < total; t += 1.0 / spec.imu_rate) {
        const SegmentSpan& seg = segment_at(spans, t, cursor);
        const TerrainProfile& p = profiles[static_cast<std::size_t>(seg.terrain)];
        double ax = p.ax_std * gauss(rng);
        double ay = p.ay_std * gauss(rng);
        double az = kGravity + p.az_std * gauss(rng);
        while (first_event < events.size() &&
               events[first_event].t + events[first_event].duration < t) {
            ++first_event;
        }
        for (std::size_t e = first_event; e < events.size() && events[e].t <= t; ++e) {
            const double bump = events[e].amplitude *
                                impact_shape(t - events[e].t, events[e].duration);
            az += bump;
            ax += 0.5 * bump;
            ay += 0.25 * bump;
        }
        stream.timestamps.push_back(t);
        stream.channels[0].push_back(ax);
        stream.channels[1].push_back(ay);
        stream.channels[2].push_back(az);
    }
    return stream;
}

}  // namespace

std::array<TerrainProfile, kTerrainCount> default_profiles() {
    std::array<TerrainProfile, kTerrainCount> out{};

    TerrainProfile& loose = out[static_cast<std::size_t>(Terrain::Loose)];
    loose.fx_mean = 10.0; loose.fx_std = 1.5;
    loose.fy_mean = 1.0;  loose.fy_std = 0.5;
    loose.fz_mean = 45.0; loose.fz_std = 2.0;
    loose.tx_mean = 0.5;  loose.tx_std = 0.2;
    loose.tz_mean = 2.0;  loose.tz_std = 0.3;
    loose.ty_noise_std = 0.05;
    loose.ax_std = 0.10; loose.ay_std = 0.10; loose.az_std = 0.30;

    TerrainProfile& comp = out[static_cast<std::size_t>(Terrain::Compressed)];
    comp.fx_mean = 20.0; comp.fx_std = 1.5;
    comp.fy_mean = 1.5;  comp.fy_std = 0.5;
    comp.fz_mean = 50.0; comp.fz_std = 2.0;
    comp.tx_mean = 0.7;  comp.tx_std = 0.2;
    comp.tz_mean = 4.0;  comp.tz_std = 0.3;
    comp.ty_noise_std = 0.05;
    comp.ax_std = 0.20; comp.ay_std = 0.20; comp.az_std = 0.50;

    TerrainProfile& peb = out[static_cast<std::size_t>(Terrain::Pebbles)];
    peb.fx_mean = 15.0; peb.fx_std = 1.8;
    peb.fy_mean = 2.0;  peb.fy_std = 0.6;
    peb.fz_mean = 48.0; peb.fz_std = 2.0;
    peb.tx_mean = 0.9;  peb.tx_std = 0.25;
    peb.tz_mean = 3.0;  peb.tz_std = 0.35;
    peb.ty_noise_std = 0.06;
    peb.ax_std = 0.30; peb.ay_std = 0.30; peb.az_std = 0.70;
    peb.impact_rate = 1.0; peb.impact_amplitude = 3.0; peb.impact_duration = 0.05;

    TerrainProfile& rock = out[static_cast<std::size_t>(Terrain::Rock)];
    rock.fx_mean = 25.0; rock.fx_std = 2.0;
    rock.fy_mean = 2.5;  rock.fy_std = 0.6;
    rock.fz_mean = 52.0; rock.fz_std = 2.0;
    rock.tx_mean = 1.1;  rock.tx_std = 0.25;
    rock.tz_mean = 5.0;  rock.tz_std = 0.4;
    rock.ty_noise_std = 0.07;
    rock.ax_std = 0.40; rock.ay_std = 0.40; rock.az_std = 0.90;
    rock.impact_rate = 2.0; rock.impact_amplitude = 6.0; rock.impact_duration = 0.06;

    return out;
}

SynthResult generate(const ScenarioSpec& spec,
                     std::span<const TerrainProfile> profiles) {
    check_spec(spec);
    check_profiles(profiles);

    // Sub-seeds drawn up front in a fixed order: scenario-level draws
    // first, then one seed per stream.
    std::mt19937_64 master(spec.seed);
    const std::uint64_t scenario_seed = master();
    std::array<std::uint64_t, 7> stream_seeds{};
    for (auto& s : stream_seeds) s = master();

    std::mt19937_64 scenario_rng(scenario_seed);
    std::uniform_real_distribution<double> speed_dist(spec.speed_min, spec.speed_max);

    std::vector<SegmentSpan> spans;
    std::vector<LabelInterval> intervals;
    double t = 0.0;
    for (const Segment& seg : spec.segments) {
        SegmentSpan span;
        span.t_start = t;
        span.t_end = t + seg.duration;
        span.terrain = seg.terrain;
        span.speed = speed_dist(scenario_rng);
        spans.push_back(span);
        intervals.push_back({span.t_start, span.t_end, seg.terrain});
        t = span.t_end;
    }

    SynthResult result;
    result.lever_true = spec.lever_true;
    result.labels = LabelTrack(std::move(intervals));
    std::size_t seed_index = 0;
    for (SensorPosition wheel : kWheelPositions) {
        result.streams.push_back(make_fts_stream(wheel, spans, spec, profiles,
                                                 stream_seeds[seed_index++]));
    }
    result.streams.push_back(
        make_imu_stream(spans, spec, profiles, stream_seeds[seed_index++]));
    return result;
}

SynthResult generate(const ScenarioSpec& spec) {
    const auto profiles = default_profiles();
    return generate(spec, profiles);
}

}  // namespace fts::synth
