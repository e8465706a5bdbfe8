#pragma once

#include "irbeacon/codebook.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace irb {

struct BeaconSpec {
    Codeword id;
    double x = 0, y = 0, z = 0;  // world meters: x right, y down, z along the road
    double size_m = 0.06;
    std::optional<double> phase_ms;  // default: a distinct prime per beacon
};

struct CameraSpec {
    double focal_px = 2000;
    int width = 1600;
    int height = 1200;
    double frame_rate_hz = 100;
    double noise_floor = 0.5;  // stddev of the additive noise, intensity units
};

enum class MotionProfile { standstill, accelerate_to_cruise };

struct MotionSpec {
    MotionProfile profile = MotionProfile::standstill;
    double start_position_m = 0;
    double cruise_speed = 8.3;  // m/s
    double acceleration = 2.0;  // m/s^2
};

struct NoiseSpec {
    double bloom_sigma_px = 1.0;
    double clutter_rate = 0.2;  // expected spurious blobs per frame
    double clutter_min = 40;    // clutter peak intensity range
    double clutter_max = 255;
};

struct IntensitySpec {
    double reference_peak = 10;  // peak pixel value at reference_distance_m
    double reference_distance_m = 120;
};

struct SceneConfig {
    double duration_s = 22.7;
    std::vector<BeaconSpec> beacons;
    CameraSpec camera;
    MotionSpec motion;
    double bit_period_ms = 70;
    NoiseSpec noise;
    IntensitySpec intensity;

    /// Phase offset actually used for beacon i.
    double phase_ms(std::size_t i) const;
    /// Throws UsageError when a field is out of range.
    void validate() const;
};

/// Parses the key = value format (see configs/). Throws DataError with the
/// offending line number on malformed input.
SceneConfig parse_scene_config(std::istream& in);
SceneConfig load_scene_config(const std::filesystem::path& path);

} // namespace irb
