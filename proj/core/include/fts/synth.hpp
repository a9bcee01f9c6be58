#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "fts/telemetry.hpp"
#include "fts/types.hpp"

namespace fts::synth {

/// Signal model of one terrain class. Force-torque channels are Gaussian
/// around per-terrain baselines in the rover frame; ty is tied to fx
/// through the scenario's true lever arm plus its own noise. IMU channels
/// are Gaussian around a gravity baseline, with optional half-sine impact
/// transients arriving as a Poisson process (pebbles, rock).
struct TerrainProfile {
    double fx_mean = 0.0, fx_std = 0.0;
    double fy_mean = 0.0, fy_std = 0.0;
    double fz_mean = 0.0, fz_std = 0.0;
    double tx_mean = 0.0, tx_std = 0.0;
    double tz_mean = 0.0, tz_std = 0.0;
    double ty_noise_std = 0.0;

    double ax_std = 0.0, ay_std = 0.0, az_std = 0.0;

    double impact_rate = 0.0;       // events per second at 0.03 m/s
    double impact_amplitude = 0.0;  // peak accel, m/s^2
    double impact_duration = 0.05;  // s
};

/// Baseline profiles, indexed by terrain. Force levels separate the four
/// classes cleanly; IMU spreads overlap more, and rock shakes harder than
/// loose sand on every axis.
std::array<TerrainProfile, kTerrainCount> default_profiles();

struct Segment {
    Terrain terrain = Terrain::Loose;
    double duration = 0.0;  // s
};

struct ScenarioSpec {
    std::vector<Segment> segments;
    double fts_rate = 100.0;  // Hz
    double imu_rate = 50.0;   // Hz
    double speed_min = 0.01;  // m/s, commanded drive speed range
    double speed_max = 0.05;
    double lever_true = 0.15;  // m, ground-truth contact lever arm
    std::uint64_t seed = 42;
};

struct SynthResult {
    std::vector<TelemetryStream> streams;  // six wheel FTS + one IMU, raw frame
    LabelTrack labels;
    double lever_true = 0.0;
};

/// Deterministic scenario synthesis: one sub-seeded generator per stream,
/// derived from the scenario seed, so every stream is reproducible on its
/// own. Right-side force-torque streams are emitted in the raw mounting
/// frame (fx, fy, tx, ty sign-flipped); frame normalization undoes it.
SynthResult generate(const ScenarioSpec& spec,
                     std::span<const TerrainProfile> profiles);
SynthResult generate(const ScenarioSpec& spec);

}  // namespace fts::synth
