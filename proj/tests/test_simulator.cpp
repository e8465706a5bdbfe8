#include "irbeacon/decoder.hpp"
#include "irbeacon/detector.hpp"
#include "irbeacon/error.hpp"
#include "irbeacon/scene_config.hpp"
#include "irbeacon/simulator.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace irb;

namespace {

SceneConfig single_beacon(double z, double x = 0.73, double y = -0.41) {
    SceneConfig c;
    c.beacons.push_back({Codeword::parse("000100110010"), x, y, z, 0.06, 13.0});
    return c;
}

} // namespace

TEST_CASE("projection") {
    const CameraSpec cam;
    const BeaconSpec b{Codeword::parse("000100110010"), 0, 0, 60, 0.06, {}};
    const auto p60 = project(b, 0, cam);
    CHECK(p60.apparent_px == doctest::Approx(2.0));
    CHECK(p60.u == doctest::Approx(799.5));
    CHECK(p60.v == doctest::Approx(599.5));
    auto b30 = b;
    b30.z = 30;
    CHECK(project(b30, 0, cam).apparent_px == doctest::Approx(4.0));
    CHECK(project(b, 60, cam).in_front == false);
    CHECK(project(b, 70, cam).in_front == false);

    auto side = b;
    side.x = 3;
    side.y = -1.5;
    const auto ps = project(side, 0, cam);
    CHECK(ps.u == doctest::Approx(799.5 + 100));
    CHECK(ps.v == doctest::Approx(599.5 - 50));
}

TEST_CASE("motion profiles") {
    MotionSpec still;
    still.start_position_m = 4;
    CHECK(vehicle_position(still, 10) == 4);

    MotionSpec drive;
    drive.profile = MotionProfile::accelerate_to_cruise;
    CHECK(vehicle_position(drive, 0) == 0);
    CHECK(vehicle_position(drive, 1) == doctest::Approx(1.0));
    const double tc = 8.3 / 2.0;
    CHECK(vehicle_position(drive, tc) == doctest::Approx(0.5 * 8.3 * tc));
    CHECK(vehicle_position(drive, tc + 2) == doctest::Approx(0.5 * 8.3 * tc + 16.6));
}

TEST_CASE("symbol timing") {
    const auto id = Codeword::parse("000100110010");
    for (std::int64_t t = 0; t < 2000000; t += 10000) {
        const auto slot = ((t + 13000) / 70000) % 12;
        CHECK(symbol_bit(id, t, 13000, 70000) == id.bit(static_cast<int>(slot)));
    }
    CHECK_THROWS_AS(symbol_bit(id, 0, 0, 0), UsageError);
}

TEST_CASE("intensity law") {
    const IntensitySpec s;
    CHECK(peak_intensity(s, 120) == doctest::Approx(10));
    CHECK(peak_intensity(s, 60) == doctest::Approx(40));
    CHECK(peak_intensity(s, 200) < 5);
    double prev = 1e9;
    for (double d = 5; d < 300; d += 5) {
        CHECK(peak_intensity(s, d) <= prev);
        prev = peak_intensity(s, d);
    }
}

TEST_CASE("noise table distribution") {
    const NoiseTable t(0.5);
    std::array<long, 9> hist{};
    for (int b = 0; b < 256; ++b)
        for (int f = 0; f < 65536; f += 3) hist[static_cast<std::size_t>(t.sample(static_cast<std::uint8_t>(b), static_cast<std::uint16_t>(f)) + 4)]++;
    long total = 0;
    for (long h : hist) total += h;
    auto frac = [&](int k) { return static_cast<double>(hist[static_cast<std::size_t>(k + 4)]) / static_cast<double>(total); };
    CHECK(frac(0) == doctest::Approx(0.6827).epsilon(0.001));
    CHECK(frac(1) == doctest::Approx(0.1573).epsilon(0.01));
    CHECK(frac(-1) == doctest::Approx(frac(1)).epsilon(0.01));
    CHECK(frac(2) == doctest::Approx(0.00135).epsilon(0.02));

    const NoiseTable none(0);
    GrayImage img(16, 16, 9);
    std::mt19937_64 rng(1);
    none.apply(img, rng);
    CHECK(std::all_of(img.pixels.begin(), img.pixels.end(), [](auto v) { return v == 9; }));
}

TEST_CASE("rendered symbol orientation follows the bit") {
    for (double d : {10.0, 25.0, 40.0, 60.0, 80.0}) {
        for (int bit : {0, 1}) {
            GrayImage img(64, 64);
            const double s = 0.06 * 2000 / d;
            draw_symbol(img, 31.37, 30.81, s, bit, 200, 1.0);
            CHECK(orientation_bit(img.view()).bit == bit);
        }
    }
}

TEST_CASE("render_frame ground truth and determinism") {
    auto c = single_beacon(40);
    c.noise.clutter_rate = 0;
    const SceneRenderer r(c);
    const auto a = r.render(17, 99);
    const auto b = r.render(17, 99);
    CHECK(a.frame.image.pixels == b.frame.image.pixels);
    CHECK(r.render(17, 100).frame.image.pixels != a.frame.image.pixels);
    CHECK(a.frame.timestamp_s == doctest::Approx(0.17));
    REQUIRE(a.record.beacons.size() == 1);
    const auto& gt = a.record.beacons[0];
    CHECK(gt.visible);
    CHECK(gt.symbol_bit == symbol_bit(c.beacons[0].id, 170000, 13000, 70000));
    CHECK(gt.distance_m == doctest::Approx(std::sqrt(40.0 * 40 + 0.73 * 0.73 + 0.41 * 0.41)));

    const auto boxes = propose(a.frame);
    REQUIRE(boxes.size() == 1);
    const auto dets = detect(a.frame);
    REQUIRE(dets.size() == 1);
    CHECK(orientation_bit(dets[0].moments).bit == gt.symbol_bit);
}

TEST_CASE("detection at 25 m lands on the ground truth") {
    const SceneRenderer r(single_beacon(25));
    for (std::int64_t i = 0; i < 20; ++i) {
        const auto f = r.render(i, 5);
        const auto dets = detect(f.frame);
        const auto& gt = f.record.beacons[0];
        int hits = 0;
        for (const auto& d : dets)
            if (std::hypot(d.centroid_x - gt.centroid_x, d.centroid_y - gt.centroid_y) < 1.0) ++hits;
        CHECK(hits == 1);
    }
}

TEST_CASE("a 50 m beacon is exactly one proposal") {
    auto c = single_beacon(50);
    c.noise.clutter_rate = 0;
    const SceneRenderer r(c);
    for (std::int64_t i = 0; i < 10; ++i) CHECK(propose(r.render(i, 3).frame).size() == 1);
}

TEST_CASE("a 200 m beacon is invisible to the detector") {
    auto c = single_beacon(200);
    c.noise.clutter_rate = 0;
    const SceneRenderer r(c);
    for (std::int64_t i = 0; i < 10; ++i) CHECK(detect(r.render(i, 3).frame).empty());
}

TEST_CASE("beacon plus a 15 px glare disk") {
    auto c = single_beacon(40);
    c.noise.clutter_rate = 0;
    auto f = SceneRenderer(c).render(4, 8);
    draw_disk(f.frame.image, 400.3, 300.6, 7.5, 180, 1.0);
    const auto dets = detect(f.frame);
    REQUIRE(dets.size() == 1);
    CHECK(std::abs(dets[0].centroid_x - f.record.beacons[0].centroid_x) < 1.0);
    const auto boxes = propose(f.frame);
    CHECK(boxes.size() == 2);
}

TEST_CASE("two beacons 40 m apart project to separate blobs") {
    SceneConfig c;
    c.noise.clutter_rate = 0;
    c.beacons.push_back({Codeword::parse("000100110010"), -20, 0, 60, 0.06, {}});
    c.beacons.push_back({Codeword::parse("010100100110"), 20, 0, 60, 0.06, {}});
    const auto f = SceneRenderer(c).render(0, 1);
    CHECK(propose(f.frame).size() == 2);
}

TEST_CASE("frame counts") {
    SceneConfig c = single_beacon(60);
    const SceneRenderer r(c);
    CHECK(r.frame_count(22.7) == 2270);
    CHECK(r.frame_count(27) == 2700);
    CHECK_THROWS_AS(r.frame_count(0), UsageError);
}

TEST_CASE("scene config parsing") {
    std::istringstream in(
        "# comment\n"
        "duration_s = 3.5\n"
        "camera.noise_floor = 0.25  # trailing\n"
        "motion.profile = accelerate_to_cruise\n"
        "beacon = 010100100110 2.5 -1.5 110\n"
        "beacon = 000101010100 2.5 -1.5 70 0.08 11\n");
    const auto c = parse_scene_config(in);
    CHECK(c.duration_s == 3.5);
    CHECK(c.camera.noise_floor == 0.25);
    CHECK(c.motion.profile == MotionProfile::accelerate_to_cruise);
    REQUIRE(c.beacons.size() == 2);
    CHECK(c.beacons[0].size_m == 0.06);
    CHECK(c.phase_ms(0) != c.phase_ms(1));
    CHECK(c.beacons[1].size_m == 0.08);
    CHECK(c.phase_ms(1) == 11);

    auto bad = [](const std::string& s) {
        std::istringstream b(s);
        return parse_scene_config(b);
    };
    CHECK_THROWS_AS(bad("nope = 1\n"), DataError);
    CHECK_THROWS_AS(bad("duration_s = abc\n"), DataError);
    CHECK_THROWS_AS(bad("duration_s = -1\n"), DataError);
    CHECK_THROWS_AS(bad("beacon = 0101 1 2 3\n"), DataError);
    CHECK_THROWS_AS(bad("motion.profile = teleport\n"), DataError);
    CHECK_THROWS_AS(bad("duration_s 3\n"), DataError);
}
