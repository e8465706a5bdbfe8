#include "irbeacon/scene_config.hpp"

#include "irbeacon/error.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace irb {

namespace {

constexpr std::array<double, 12> kDefaultPhasesMs{13, 29, 47, 3, 61, 37, 19, 53, 7, 41, 23, 67};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& s, int line) {
    double v = 0;
    const char* end = s.data() + s.size();
    auto [p, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || p != end || !std::isfinite(v))
        throw DataError("line " + std::to_string(line) + ": bad number '" + s + "'");
    return v;
}

int to_int(const std::string& s, int line) {
    int v = 0;
    const char* end = s.data() + s.size();
    auto [p, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || p != end) throw DataError("line " + std::to_string(line) + ": bad integer '" + s + "'");
    return v;
}

BeaconSpec parse_beacon(const std::string& value, int line) {
    std::istringstream ss(value);
    std::vector<std::string> f;
    for (std::string tok; ss >> tok;) f.push_back(tok);
    if (f.size() < 4 || f.size() > 6)
        throw DataError("line " + std::to_string(line) + ": beacon = bits x y z [size_m] [phase_ms]");
    BeaconSpec b;
    try {
        b.id = Codeword::parse(f[0]);
    } catch (const UsageError& e) {
        throw DataError("line " + std::to_string(line) + ": " + e.what());
    }
    b.x = to_double(f[1], line);
    b.y = to_double(f[2], line);
    b.z = to_double(f[3], line);
    if (f.size() > 4) b.size_m = to_double(f[4], line);
    if (f.size() > 5) b.phase_ms = to_double(f[5], line);
    return b;
}

} // namespace

double SceneConfig::phase_ms(std::size_t i) const {
    if (beacons.at(i).phase_ms) return *beacons[i].phase_ms;
    return kDefaultPhasesMs[i % kDefaultPhasesMs.size()];
}

void SceneConfig::validate() const {
    if (!(duration_s > 0)) throw UsageError("duration_s must be positive");
    if (!(camera.focal_px > 0)) throw UsageError("camera.focal_px must be positive");
    if (camera.width < 1 || camera.height < 1) throw UsageError("camera size must be positive");
    if (!(camera.frame_rate_hz > 0)) throw UsageError("camera.frame_rate_hz must be positive");
    if (camera.noise_floor < 0) throw UsageError("camera.noise_floor must be non-negative");
    if (!(bit_period_ms > 0)) throw UsageError("timing.bit_period_ms must be positive");
    if (motion.cruise_speed < 0 || !(motion.acceleration > 0)) throw UsageError("bad motion parameters");
    if (noise.bloom_sigma_px < 0 || noise.clutter_rate < 0) throw UsageError("bad noise parameters");
    if (noise.clutter_min > noise.clutter_max) throw UsageError("noise.clutter_min exceeds noise.clutter_max");
    if (!(intensity.reference_peak > 0) || !(intensity.reference_distance_m > 0))
        throw UsageError("bad intensity parameters");
    for (const auto& b : beacons)
        if (!(b.size_m > 0)) throw UsageError("beacon size must be positive");
}

SceneConfig parse_scene_config(std::istream& in) {
    SceneConfig c;
    using Setter = std::function<void(const std::string&, int)>;
    auto num = [](double& field) -> Setter { return [&field](const std::string& v, int l) { field = to_double(v, l); }; };
    const std::map<std::string, Setter> setters{
        {"duration_s", num(c.duration_s)},
        {"camera.focal_px", num(c.camera.focal_px)},
        {"camera.width", [&](const std::string& v, int l) { c.camera.width = to_int(v, l); }},
        {"camera.height", [&](const std::string& v, int l) { c.camera.height = to_int(v, l); }},
        {"camera.frame_rate_hz", num(c.camera.frame_rate_hz)},
        {"camera.noise_floor", num(c.camera.noise_floor)},
        {"motion.profile",
         [&](const std::string& v, int l) {
             if (v == "standstill") c.motion.profile = MotionProfile::standstill;
             else if (v == "accelerate_to_cruise") c.motion.profile = MotionProfile::accelerate_to_cruise;
             else throw DataError("line " + std::to_string(l) + ": unknown motion profile '" + v + "'");
         }},
        {"motion.start_position_m", num(c.motion.start_position_m)},
        {"motion.cruise_speed", num(c.motion.cruise_speed)},
        {"motion.acceleration", num(c.motion.acceleration)},
        {"timing.bit_period_ms", num(c.bit_period_ms)},
        {"noise.bloom_sigma_px", num(c.noise.bloom_sigma_px)},
        {"noise.clutter_rate", num(c.noise.clutter_rate)},
        {"noise.clutter_min", num(c.noise.clutter_min)},
        {"noise.clutter_max", num(c.noise.clutter_max)},
        {"intensity.reference_peak", num(c.intensity.reference_peak)},
        {"intensity.reference_distance_m", num(c.intensity.reference_distance_m)},
    };

    std::string raw;
    for (int line = 1; std::getline(in, raw); ++line) {
        const std::string s = trim(raw.substr(0, raw.find('#')));
        if (s.empty()) continue;
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw DataError("line " + std::to_string(line) + ": expected key = value");
        const std::string key = trim(s.substr(0, eq));
        const std::string value = trim(s.substr(eq + 1));
        if (key == "beacon") {
            c.beacons.push_back(parse_beacon(value, line));
            continue;
        }
        auto it = setters.find(key);
        if (it == setters.end()) throw DataError("line " + std::to_string(line) + ": unknown key '" + key + "'");
        it->second(value, line);
    }
    try {
        c.validate();
    } catch (const UsageError& e) {
        throw DataError(e.what());
    }
    return c;
}

SceneConfig load_scene_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config " + path.string());
    return parse_scene_config(in);
}

} // namespace irb
