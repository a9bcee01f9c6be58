#include "fts/types.hpp"

namespace fts {

std::string_view terrain_name(Terrain t) {
    switch (t) {
        case Terrain::Loose: return "loose";
        case Terrain::Compressed: return "compressed";
        case Terrain::Pebbles: return "pebbles";
        case Terrain::Rock: return "rock";
    }
    throw ConfigError("invalid terrain value");
}

std::optional<Terrain> terrain_from_name(std::string_view name) {
    for (Terrain t : kAllTerrains) {
        if (terrain_name(t) == name) return t;
    }
    return std::nullopt;
}

std::string_view position_name(SensorPosition p) {
    switch (p) {
        case SensorPosition::FL: return "fl";
        case SensorPosition::FR: return "fr";
        case SensorPosition::CL: return "cl";
        case SensorPosition::CR: return "cr";
        case SensorPosition::BL: return "bl";
        case SensorPosition::BR: return "br";
        case SensorPosition::Chassis: return "chassis";
    }
    throw ConfigError("invalid sensor position");
}

SensorId SensorId::fts(SensorPosition wheel) {
    if (wheel == SensorPosition::Chassis)
        throw ConfigError("FTS sensors are mounted at wheel stations, not the chassis");
    return {SensorKind::Fts, wheel};
}

SensorId SensorId::imu() { return {SensorKind::Imu, SensorPosition::Chassis}; }

std::string SensorId::name() const {
    if (kind == SensorKind::Imu) return "imu";
    return "fts_" + std::string(position_name(position));
}

}  // namespace fts
