#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "fts/errors.hpp"

namespace fts {

/// Terrain classes, in the canonical order used for confusion-matrix rows
/// and prediction tie-breaks.
enum class Terrain { Loose = 0, Compressed = 1, Pebbles = 2, Rock = 3 };

inline constexpr std::size_t kTerrainCount = 4;
inline constexpr std::array<Terrain, kTerrainCount> kAllTerrains = {
    Terrain::Loose, Terrain::Compressed, Terrain::Pebbles, Terrain::Rock};

std::string_view terrain_name(Terrain t);
std::optional<Terrain> terrain_from_name(std::string_view name);

enum class SensorKind { Fts, Imu };

/// Mounting position: six wheel stations plus the chassis-mounted IMU.
enum class SensorPosition { FL, FR, CL, CR, BL, BR, Chassis };

inline constexpr std::array<SensorPosition, 6> kWheelPositions = {
    SensorPosition::FL, SensorPosition::FR, SensorPosition::CL,
    SensorPosition::CR, SensorPosition::BL, SensorPosition::BR};

std::string_view position_name(SensorPosition p);

struct SensorId {
    SensorKind kind = SensorKind::Fts;
    SensorPosition position = SensorPosition::FL;

    /// FTS sensors sit at wheel stations, the IMU on the chassis.
    static SensorId fts(SensorPosition wheel);
    static SensorId imu();

    /// Lowercase identifier: "fts_fl", ..., "imu". Used in feature names
    /// and canonical file names.
    std::string name() const;

    bool is_right_side() const {
        return position == SensorPosition::FR || position == SensorPosition::CR ||
               position == SensorPosition::BR;
    }

    bool operator==(const SensorId&) const = default;
};

/// Frame of a telemetry stream. RAW is the per-sensor frame as logged;
/// ROVER is the common frame after right-side sign normalization.
enum class Frame { Raw, Rover };

}  // namespace fts
