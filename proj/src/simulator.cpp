#include "irbeacon/simulator.hpp"

#include "irbeacon/error.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <cmath>
#include <numbers>

namespace irb {

namespace {

constexpr int kSuper = 4;

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

int poisson(double lambda, std::mt19937_64& rng) {
    if (lambda <= 0) return 0;
    const double u = uniform01(rng);
    double p = std::exp(-lambda), cdf = p;
    int k = 0;
    while (u > cdf && k < 1000) {
        ++k;
        p *= lambda / k;
        cdf += p;
    }
    return k;
}

std::vector<double> gaussian_kernel(double sigma) {
    if (sigma <= 0) return {1.0};
    const int r = static_cast<int>(std::ceil(4.0 * sigma));
    std::vector<double> k(static_cast<std::size_t>(2 * r + 1));
    double sum = 0;
    for (int i = -r; i <= r; ++i) sum += k[static_cast<std::size_t>(i + r)] = std::exp(-0.5 * i * i / (sigma * sigma));
    for (auto& v : k) v /= sum;
    return k;
}

// Supersamples `inside` over the square of half size `extent` around (u, v),
// blurs, box-downsamples, normalizes to `peak` and adds into the image.
template <class Inside>
void splat(GrayImage& img, double u, double v, double extent, double peak, double sigma_px, Inside inside) {
    const double reach = extent + 4.0 * sigma_px + 1.0;
    const int x0 = static_cast<int>(std::floor(u - reach)), x1 = static_cast<int>(std::ceil(u + reach));
    const int y0 = static_cast<int>(std::floor(v - reach)), y1 = static_cast<int>(std::ceil(v + reach));
    if (x1 < 0 || y1 < 0 || x0 >= img.width || y0 >= img.height || !(peak > 0)) return;
    const int nx = (x1 - x0 + 1) * kSuper, ny = (y1 - y0 + 1) * kSuper;
    auto at = [nx](std::vector<double>& b, int x, int y) -> double& {
        return b[static_cast<std::size_t>(y) * static_cast<std::size_t>(nx) + static_cast<std::size_t>(x)];
    };

    std::vector<double> sub(static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny), 0.0);
    for (int sy = 0; sy < ny; ++sy)
        for (int sx = 0; sx < nx; ++sx) {
            const double px = x0 - 0.5 + (sx + 0.5) / kSuper - u;
            const double py = y0 - 0.5 + (sy + 0.5) / kSuper - v;
            if (inside(px, py)) at(sub, sx, sy) = 1.0;
        }

    const auto k = gaussian_kernel(sigma_px * kSuper);
    const int r = static_cast<int>(k.size() / 2);
    if (r > 0) {
        std::vector<double> tmp(sub.size(), 0.0);
        for (int sy = 0; sy < ny; ++sy)
            for (int sx = 0; sx < nx; ++sx) {
                double acc = 0;
                for (int i = -r; i <= r; ++i) {
                    const int xx = sx + i;
                    if (xx >= 0 && xx < nx) acc += k[static_cast<std::size_t>(i + r)] * at(sub, xx, sy);
                }
                at(tmp, sx, sy) = acc;
            }
        for (int sy = 0; sy < ny; ++sy)
            for (int sx = 0; sx < nx; ++sx) {
                double acc = 0;
                for (int i = -r; i <= r; ++i) {
                    const int yy = sy + i;
                    if (yy >= 0 && yy < ny) acc += k[static_cast<std::size_t>(i + r)] * at(tmp, sx, yy);
                }
                at(sub, sx, sy) = acc;
            }
    }

    const int w = x1 - x0 + 1, h = y1 - y0 + 1;
    std::vector<double> px(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), 0.0);
    double max = 0;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double acc = 0;
            for (int j = 0; j < kSuper; ++j)
                for (int i = 0; i < kSuper; ++i) acc += at(sub, x * kSuper + i, y * kSuper + j);
            acc /= kSuper * kSuper;
            px[static_cast<std::size_t>(y * w + x)] = acc;
            max = std::max(max, acc);
        }
    if (max <= 0) return;

    for (int y = 0; y < h; ++y) {
        const int iy = y0 + y;
        if (iy < 0 || iy >= img.height) continue;
        for (int x = 0; x < w; ++x) {
            const int ix = x0 + x;
            if (ix < 0 || ix >= img.width) continue;
            const double val = std::round(px[static_cast<std::size_t>(y * w + x)] / max * peak);
            auto& dst = img.at(ix, iy);
            dst = static_cast<std::uint8_t>(std::min(255.0, dst + val));
        }
    }
}

} // namespace

Projection project(const BeaconSpec& beacon, double vehicle_position, const CameraSpec& camera) {
    Projection p;
    const double dz = beacon.z - vehicle_position;
    p.distance = std::sqrt(beacon.x * beacon.x + beacon.y * beacon.y + dz * dz);
    p.depth = dz;
    if (!(dz > 0)) return p;
    p.in_front = true;
    p.u = 0.5 * (camera.width - 1) + camera.focal_px * beacon.x / dz;
    p.v = 0.5 * (camera.height - 1) + camera.focal_px * beacon.y / dz;
    p.apparent_px = beacon.size_m * camera.focal_px / dz;
    return p;
}

double vehicle_position(const MotionSpec& motion, double t) {
    if (motion.profile == MotionProfile::standstill || t <= 0) return motion.start_position_m;
    const double t_cruise = motion.cruise_speed / motion.acceleration;
    if (t <= t_cruise) return motion.start_position_m + 0.5 * motion.acceleration * t * t;
    return motion.start_position_m + 0.5 * motion.cruise_speed * t_cruise + motion.cruise_speed * (t - t_cruise);
}

int symbol_bit(const Codeword& id, std::int64_t t_us, std::int64_t phase_us, std::int64_t bit_period_us) {
    if (bit_period_us <= 0) throw UsageError("bit period must be positive");
    const std::int64_t n = id.length();
    const std::int64_t k = t_us + phase_us;
    const std::int64_t slot = (k >= 0 ? k : k - bit_period_us + 1) / bit_period_us;
    return id.bit(static_cast<int>(((slot % n) + n) % n));
}

double peak_intensity(const IntensitySpec& spec, double distance_m) {
    const double r = spec.reference_distance_m / distance_m;
    return spec.reference_peak * r * r;
}

void draw_symbol(GrayImage& img, double u, double v, double apparent_px, int bit, double peak, double bloom_sigma_px) {
    const double half_len = 0.5 * apparent_px * std::numbers::sqrt2;
    const double half_width = half_len / 5.0;
    const double ux = 1.0 / std::numbers::sqrt2;
    const double uy = (bit ? 1.0 : -1.0) / std::numbers::sqrt2;
    splat(img, u, v, half_len + half_width, peak, bloom_sigma_px, [&](double px, double py) {
        const double along = px * ux + py * uy;
        const double across = -px * uy + py * ux;
        return std::abs(along) <= half_len && std::abs(across) <= half_width;
    });
}

void draw_disk(GrayImage& img, double u, double v, double radius_px, double peak, double bloom_sigma_px) {
    splat(img, u, v, radius_px, peak, bloom_sigma_px,
          [r2 = radius_px * radius_px](double px, double py) { return px * px + py * py <= r2; });
}

NoiseTable::NoiseTable(double sigma) {
    if (sigma < 0) throw UsageError("noise sigma must be non-negative");
    if (sigma == 0) return;
    // Quantile q maps to the rounded Gaussian value whose rounding band holds
    // it. An 8-bit draw picks one of 256 quantile buckets; buckets that
    // straddle a band edge are refined with 16 more bits.
    auto cdf = [sigma](double x) { return 0.5 * std::erfc(-x / (sigma * std::numbers::sqrt2)); };
    auto value_at = [&](double q) {
        int k = -127;
        while (k < 127 && cdf(k + 0.5) <= q) ++k;
        return k;
    };
    for (int b = 0; b < 256; ++b) {
        const int lo = value_at(b / 256.0), hi = value_at((b + 1) / 256.0 - 0x1.0p-40);
        if (lo == hi) {
            coarse_[static_cast<std::size_t>(b)] = static_cast<std::int8_t>(lo);
            continue;
        }
        coarse_[static_cast<std::size_t>(b)] = kRefine;
        Refinement r{static_cast<std::uint8_t>(b), {}};
        int prev = value_at((b + 0.5 / 65536.0) / 256.0);
        for (int j = 0; j < 65536; ++j) {
            const int k = value_at((b + (j + 0.5) / 65536.0) / 256.0);
            if (j == 0 || k != prev) r.cuts.emplace_back(static_cast<std::uint16_t>(j), static_cast<std::int8_t>(k));
            prev = k;
        }
        refine_.push_back(std::move(r));
    }
}

int NoiseTable::refine(std::uint8_t bucket, std::uint16_t u) const {
    for (const auto& r : refine_) {
        if (r.bucket != bucket) continue;
        int k = r.cuts.front().second;
        for (const auto& [cut, v] : r.cuts) {
            if (cut > u) break;
            k = v;
        }
        return k;
    }
    return 0;
}

int NoiseTable::sample(std::uint8_t bucket, std::uint16_t fine) const {
    const int v = coarse_[bucket];
    return v == kRefine ? refine(bucket, fine) : v;
}

void NoiseTable::apply(GrayImage& img, std::mt19937_64& rng) const {
    // One byte of engine output per pixel, least significant byte first,
    // processed in cache-sized chunks.
    constexpr std::size_t kChunkDraws = 512;
    std::array<std::uint64_t, kChunkDraws> draws;
    std::array<std::uint8_t, kChunkDraws * 8> bucket;
    const std::int8_t* coarse = coarse_.data();
    std::uint64_t fine_bits = 0;
    int fine_left = 0;

    const std::size_t n = img.pixels.size();
    for (std::size_t start = 0; start < n; start += bucket.size()) {
        const std::size_t len = std::min(bucket.size(), n - start);
        const std::size_t used = (len + 7) / 8;
        for (std::size_t d = 0; d < used; ++d) draws[d] = rng();
        if constexpr (std::endian::native == std::endian::little) {
            std::memcpy(bucket.data(), draws.data(), used * 8);
        } else {
            for (std::size_t i = 0; i < used * 8; ++i) bucket[i] = static_cast<std::uint8_t>(draws[i / 8] >> (8 * (i % 8)));
        }
        std::uint8_t* __restrict px = img.pixels.data() + start;
        for (std::size_t i = 0; i < len; ++i) {
            int v = coarse[bucket[i]];
            if (v == kRefine) [[unlikely]] {
                if (fine_left == 0) {
                    fine_bits = rng();
                    fine_left = 4;
                }
                v = refine(bucket[i], static_cast<std::uint16_t>(fine_bits));
                fine_bits >>= 16;
                --fine_left;
            }
            px[i] = static_cast<std::uint8_t>(std::clamp(px[i] + v, 0, 255));
        }
    }
}

SceneRenderer::SceneRenderer(SceneConfig config) : config_(std::move(config)), noise_(config_.camera.noise_floor) {
    config_.validate();
}

std::int64_t SceneRenderer::frame_count(double duration_s) const {
    if (!(duration_s > 0)) throw UsageError("duration must be positive");
    return std::llround(duration_s * config_.camera.frame_rate_hz);
}

RenderedFrame SceneRenderer::render(std::int64_t frame_index, std::uint64_t seed) const {
    if (frame_index < 0) throw UsageError("frame index must be non-negative");
    const auto& cam = config_.camera;
    RenderedFrame out;
    out.frame.image = GrayImage(cam.width, cam.height);
    out.frame.index = frame_index;
    out.frame.timestamp_s = static_cast<double>(frame_index) / cam.frame_rate_hz;
    const double t = out.frame.timestamp_s;
    const auto t_us = std::llround(static_cast<double>(frame_index) * 1e6 / cam.frame_rate_hz);
    const auto bit_us = std::llround(config_.bit_period_ms * 1000.0);
    const double pos = vehicle_position(config_.motion, t);

    out.record.frame_index = frame_index;
    out.record.timestamp_s = t;
    out.record.vehicle_position_m = pos;

    for (std::size_t b = 0; b < config_.beacons.size(); ++b) {
        const auto& spec = config_.beacons[b];
        const auto p = project(spec, pos, cam);
        BeaconTruth truth;
        truth.beacon_id_bits = spec.id.str();
        truth.symbol_bit = symbol_bit(spec.id, t_us, std::llround(config_.phase_ms(b) * 1000.0), bit_us);
        truth.distance_m = p.distance;
        truth.visible = p.in_front && p.u >= -0.5 && p.u < cam.width - 0.5 && p.v >= -0.5 && p.v < cam.height - 0.5;
        if (p.in_front) {
            truth.centroid_x = p.u;
            truth.centroid_y = p.v;
            draw_symbol(out.frame.image, p.u, p.v, p.apparent_px, truth.symbol_bit,
                        peak_intensity(config_.intensity, p.distance), config_.noise.bloom_sigma_px);
        }
        out.record.beacons.push_back(truth);
    }

    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(frame_index), static_cast<std::uint32_t>(frame_index >> 32)};
    std::mt19937_64 rng(seq);

    const int clutter = poisson(config_.noise.clutter_rate, rng);
    for (int c = 0; c < clutter; ++c) {
        const bool hot_pixel = uniform01(rng) < 0.5;
        const double x = uniform01(rng) * cam.width - 0.5;
        const double y = uniform01(rng) * cam.height - 0.5;
        const double level =
            config_.noise.clutter_min + uniform01(rng) * (config_.noise.clutter_max - config_.noise.clutter_min);
        const double radius = 6.0 + 8.0 * uniform01(rng);
        if (hot_pixel) {
            const int ix = std::clamp(static_cast<int>(std::lround(x)), 0, cam.width - 2);
            const int iy = std::clamp(static_cast<int>(std::lround(y)), 0, cam.height - 1);
            const auto v = static_cast<std::uint8_t>(std::lround(level));
            out.frame.image.at(ix, iy) = std::max(out.frame.image.at(ix, iy), v);
            if (radius > 10.0) out.frame.image.at(ix + 1, iy) = std::max(out.frame.image.at(ix + 1, iy), v);
        } else {
            draw_disk(out.frame.image, x, y, radius, level, config_.noise.bloom_sigma_px);
        }
    }
    noise_.apply(out.frame.image, rng);
    return out;
}

std::int64_t simulate(const SceneConfig& config, double duration_s, std::uint64_t seed,
                      const std::filesystem::path& out_dir) {
    SceneRenderer renderer(config);
    const auto n = renderer.frame_count(duration_s);
    SequenceWriter writer(out_dir);
    for (std::int64_t i = 0; i < n; ++i) {
        auto r = renderer.render(i, seed);
        writer.write(r.frame, r.record);
    }
    return n;
}

} // namespace irb
