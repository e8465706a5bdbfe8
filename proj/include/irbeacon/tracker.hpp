#pragma once

#include "irbeacon/decoder.hpp"
#include "irbeacon/detector.hpp"

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace irb {

struct TrackerParams {
    double max_distance_px = 50.0;  // association gate
    int max_unmatched_frames = 30;  // a track survives this many misses
};

/// A persistent beacon hypothesis with its own decoder.
struct Track {
    int track_id = 0;
    double last_x = 0;
    double last_y = 0;
    std::int64_t last_matched_frame = 0;
    int age_unmatched = 0;
    std::vector<TrackSample> history;
    DecoderState decoder;
};

struct Assignment {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (track, detection) indices
    std::vector<std::size_t> unmatched_detections;           // ascending
};

/// Greedy nearest-centroid matching: candidate pairs within max_distance are
/// consumed in ascending distance (ties: lower track_id, then lower detection
/// index); each track and detection is used at most once.
Assignment associate(std::span<const Track> tracks, std::span<const Detection> detections, double max_distance);

/// Removes tracks that missed more than max_unmatched frames and returns them.
std::vector<Track> prune(std::vector<Track>& tracks, int max_unmatched = 30);

/// Frame-by-frame tracking state machine for one sequence.
class Tracker {
public:
    explicit Tracker(TrackerParams params = {}, DecoderParams decoder = {});

    /// Feeds one frame's detections with their orientation estimates
    /// (one per detection). Returns tracks retired by this frame.
    std::vector<Track> update(std::int64_t frame_index, std::span<const Detection> detections,
                              std::span<const OrientationEstimate> orientations);

    /// Retires every live track.
    std::vector<Track> finish();

    const std::vector<Track>& tracks() const { return tracks_; }
    int tracks_created() const { return next_id_; }

private:
    TrackerParams params_;
    DecoderParams decoder_params_;
    std::vector<Track> tracks_;
    int next_id_ = 0;
    std::optional<std::int64_t> last_frame_;
};

/// Replays a track's history through a fresh decoder and matches the codebook.
DecodeResult decode_track(const Track& track, const Codebook& book);

} // namespace irb
