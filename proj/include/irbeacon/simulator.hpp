#pragma once

#include "irbeacon/image.hpp"
#include "irbeacon/scene_config.hpp"
#include "irbeacon/sequence.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <random>
#include <utility>
#include <vector>

namespace irb {

struct Projection {
    bool in_front = false;
    double u = 0, v = 0;        // pixel coordinates, pixel centers at integers
    double depth = 0;           // along the optical axis
    double distance = 0;        // Euclidean, camera to beacon center
    double apparent_px = 0;     // size_m * focal / depth
};

/// Pinhole projection from a camera at (0, 0, vehicle_position) looking down +z,
/// principal point at the image center.
Projection project(const BeaconSpec& beacon, double vehicle_position, const CameraSpec& camera);

/// Vehicle position along z at time t.
double vehicle_position(const MotionSpec& motion, double t);

/// Bit shown at t_us: id bit floor((t + phase) / period) mod length.
int symbol_bit(const Codeword& id, std::int64_t t_us, std::int64_t phase_us, std::int64_t bit_period_us);

/// Peak pixel intensity of a beacon at the given distance (1/d^2 law).
double peak_intensity(const IntensitySpec& spec, double distance_m);

/// Adds the diagonal symbol ("\" for bit 1, "/" for 0): a bar spanning the
/// beacon square corner to corner with 5:1 aspect, 4x supersampled, bloomed,
/// and scaled to the given peak.
void draw_symbol(GrayImage& img, double u, double v, double apparent_px, int bit, double peak, double bloom_sigma_px);

/// Adds a filled disk rendered the same way (glare, reflections).
void draw_disk(GrayImage& img, double u, double v, double radius_px, double peak, double bloom_sigma_px);

/// Zero-mean Gaussian noise quantized to whole intensity steps, sampled by
/// table lookup on raw engine bits so the output is identical on every platform.
class NoiseTable {
public:
    explicit NoiseTable(double sigma);
    /// Adds noise to every pixel, clamping to [0, 255].
    void apply(GrayImage& img, std::mt19937_64& rng) const;
    /// Noise value for a coarse 8-bit draw, refined by `fine` when needed.
    int sample(std::uint8_t bucket, std::uint16_t fine) const;

private:
    static constexpr std::int8_t kRefine = -128;
    struct Refinement {
        std::uint8_t bucket;
        std::vector<std::pair<std::uint16_t, std::int8_t>> cuts;  // value from each cut on
    };
    int refine(std::uint8_t bucket, std::uint16_t u) const;

    std::array<std::int8_t, 256> coarse_{};
    std::vector<Refinement> refine_;
};

struct RenderedFrame {
    Frame frame;
    FrameRecord record;
};

/// Renders whole sequences; frames are independent given (config, seed, index).
class SceneRenderer {
public:
    explicit SceneRenderer(SceneConfig config);

    std::int64_t frame_count(double duration_s) const;
    std::int64_t frame_count() const { return frame_count(config_.duration_s); }
    RenderedFrame render(std::int64_t frame_index, std::uint64_t seed) const;
    const SceneConfig& config() const { return config_; }

private:
    SceneConfig config_;
    NoiseTable noise_;
};

inline RenderedFrame render_frame(const SceneConfig& config, std::int64_t frame_index, std::uint64_t seed) {
    return SceneRenderer(config).render(frame_index, seed);
}

/// Writes duration_s worth of frames plus sidecar into out_dir.
/// Throws IoError if the directory cannot be written.
std::int64_t simulate(const SceneConfig& config, double duration_s, std::uint64_t seed,
                      const std::filesystem::path& out_dir);

} // namespace irb
