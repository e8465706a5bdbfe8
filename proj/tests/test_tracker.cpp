#include "irbeacon/error.hpp"
#include "irbeacon/tracker.hpp"

#include <doctest.h>

#include <set>

using namespace irb;

namespace {

Detection at(double x, double y) {
    Detection d;
    d.centroid_x = x;
    d.centroid_y = y;
    return d;
}

Track track(int id, double x, double y) {
    Track t;
    t.track_id = id;
    t.last_x = x;
    t.last_y = y;
    return t;
}

} // namespace

TEST_CASE("association basics") {
    const std::vector<Track> one{track(0, 100, 100)};
    const auto near = associate(one, std::vector{at(103, 104)}, 50);
    REQUIRE(near.pairs.size() == 1);
    CHECK(near.unmatched_detections.empty());

    const auto far = associate(one, std::vector{at(180, 100)}, 50);
    CHECK(far.pairs.empty());
    CHECK(far.unmatched_detections == std::vector<std::size_t>{0});

    CHECK(associate(one, std::vector{at(150, 100)}, 50).pairs.size() == 1);  // inclusive gate
    CHECK_THROWS_AS(associate(one, std::vector{at(0, 0)}, 0), UsageError);
}

TEST_CASE("greedy crossed geometry") {
    // Tracks at (0,0) and (10,0); detections at (1,0) and (4,0). Greedy takes
    // the 1 px edge first, leaving (4,0) for the track 6 px away, although the
    // cheaper total pairing would be the reverse.
    const std::vector<Track> tracks{track(1, 0, 0), track(2, 10, 0)};
    const auto a = associate(tracks, std::vector{at(1, 0), at(4, 0)}, 50);
    REQUIRE(a.pairs.size() == 2);
    CHECK(a.pairs[0] == std::pair<std::size_t, std::size_t>{0, 0});
    CHECK(a.pairs[1] == std::pair<std::size_t, std::size_t>{1, 1});
}

TEST_CASE("ties resolve by track id then detection order") {
    const std::vector<Track> tracks{track(7, 10, 0), track(3, -10, 0)};
    const auto a = associate(tracks, std::vector{at(0, 0)}, 50);
    REQUIRE(a.pairs.size() == 1);
    CHECK(a.pairs[0].first == 1);  // track id 3

    const std::vector<Track> single{track(0, 0, 0)};
    const auto b = associate(single, std::vector{at(0, 5), at(0, -5)}, 50);
    REQUIRE(b.pairs.size() == 1);
    CHECK(b.pairs[0].second == 0);
}

TEST_CASE("assignment is injective") {
    const std::vector<Track> tracks{track(0, 0, 0), track(1, 2, 0), track(2, 4, 0)};
    const std::vector<Detection> dets{at(1, 0), at(3, 0), at(2, 1), at(40, 0)};
    const auto a = associate(tracks, dets, 50);
    std::set<std::size_t> ts, ds;
    for (auto [t, d] : a.pairs) {
        CHECK(ts.insert(t).second);
        CHECK(ds.insert(d).second);
    }
    CHECK(a.pairs.size() + a.unmatched_detections.size() == dets.size());
}

TEST_CASE("prune keeps 30 misses and drops 31") {
    std::vector<Track> tracks{track(0, 0, 0), track(1, 0, 0), track(2, 0, 0)};
    tracks[0].age_unmatched = 30;
    tracks[1].age_unmatched = 31;
    tracks[2].age_unmatched = 0;
    const auto gone = prune(tracks, 30);
    REQUIRE(gone.size() == 1);
    CHECK(gone[0].track_id == 1);
    REQUIRE(tracks.size() == 2);
    CHECK(tracks[0].track_id == 0);
    CHECK(tracks[1].track_id == 2);
}

TEST_CASE("tracker lifecycle") {
    Tracker tr;
    const std::vector<OrientationEstimate> o1{{1, false}};
    std::int64_t f = 0;
    for (; f < 10; ++f) CHECK(tr.update(f, std::vector{at(100.0 + f, 50)}, o1).empty());
    REQUIRE(tr.tracks().size() == 1);
    CHECK(tr.tracks()[0].history.size() == 10);

    // Gaps up to 30 frames keep the track; it picks up again afterwards.
    for (; f < 40; ++f) CHECK(tr.update(f, {}, {}).empty());
    CHECK(tr.tracks()[0].age_unmatched == 30);
    tr.update(f++, std::vector{at(112, 50)}, o1);
    REQUIRE(tr.tracks().size() == 1);
    CHECK(tr.tracks()[0].age_unmatched == 0);

    for (int k = 0; k < 30; ++k) CHECK(tr.update(f++, {}, {}).empty());
    const auto retired = tr.update(f++, {}, {});
    REQUIRE(retired.size() == 1);
    CHECK(retired[0].history.size() == 11);
    CHECK(tr.tracks().empty());

    tr.update(f++, std::vector{at(500, 500)}, o1);
    CHECK(tr.tracks()[0].track_id == 1);
    CHECK(tr.finish().size() == 1);
    CHECK_THROWS_AS(tr.update(f - 1, {}, {}), UsageError);
}

TEST_CASE("tracker is deterministic") {
    auto play = [] {
        Tracker tr;
        std::vector<int> ids;
        for (std::int64_t f = 0; f < 50; ++f) {
            std::vector<Detection> d{at(10 + f, 10), at(300, 200 - f), at(10 + f + 30, 10)};
            std::vector<OrientationEstimate> o(d.size());
            tr.update(f, d, o);
        }
        for (const auto& t : tr.finish()) ids.push_back(t.track_id * 1000 + static_cast<int>(t.history.size()));
        return ids;
    };
    CHECK(play() == play());
}
