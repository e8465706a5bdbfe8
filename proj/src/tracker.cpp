#include "irbeacon/tracker.hpp"

#include "irbeacon/error.hpp"

#include <algorithm>
#include <cmath>

namespace irb {

Assignment associate(std::span<const Track> tracks, std::span<const Detection> detections, double max_distance) {
    if (!(max_distance > 0)) throw UsageError("association distance must be positive");
    struct Candidate {
        double dist;
        int track_id;
        std::size_t track;
        std::size_t det;
    };
    std::vector<Candidate> cands;
    for (std::size_t t = 0; t < tracks.size(); ++t)
        for (std::size_t d = 0; d < detections.size(); ++d) {
            const double dist = std::hypot(detections[d].centroid_x - tracks[t].last_x,
                                           detections[d].centroid_y - tracks[t].last_y);
            if (dist <= max_distance) cands.push_back({dist, tracks[t].track_id, t, d});
        }
    std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
        if (a.dist != b.dist) return a.dist < b.dist;
        if (a.track_id != b.track_id) return a.track_id < b.track_id;
        return a.det < b.det;
    });

    Assignment out;
    std::vector<bool> track_used(tracks.size(), false), det_used(detections.size(), false);
    for (const auto& c : cands) {
        if (track_used[c.track] || det_used[c.det]) continue;
        track_used[c.track] = det_used[c.det] = true;
        out.pairs.emplace_back(c.track, c.det);
    }
    for (std::size_t d = 0; d < detections.size(); ++d)
        if (!det_used[d]) out.unmatched_detections.push_back(d);
    return out;
}

std::vector<Track> prune(std::vector<Track>& tracks, int max_unmatched) {
    std::vector<Track> retired;
    auto keep = std::stable_partition(tracks.begin(), tracks.end(),
                                      [&](const Track& t) { return t.age_unmatched <= max_unmatched; });
    std::move(keep, tracks.end(), std::back_inserter(retired));
    tracks.erase(keep, tracks.end());
    return retired;
}

Tracker::Tracker(TrackerParams params, DecoderParams decoder) : params_(params), decoder_params_(decoder) {
    if (!(params_.max_distance_px > 0)) throw UsageError("association distance must be positive");
    if (params_.max_unmatched_frames < 0) throw UsageError("track age limit must be non-negative");
}

std::vector<Track> Tracker::update(std::int64_t frame_index, std::span<const Detection> detections,
                                   std::span<const OrientationEstimate> orientations) {
    if (orientations.size() != detections.size()) throw UsageError("one orientation per detection required");
    if (last_frame_ && frame_index <= *last_frame_) throw UsageError("frames must be fed in increasing order");
    const std::int64_t elapsed = last_frame_ ? frame_index - *last_frame_ : 1;
    last_frame_ = frame_index;

    const auto assignment = associate(tracks_, detections, params_.max_distance_px);
    std::vector<bool> matched(tracks_.size(), false);
    for (auto [t, d] : assignment.pairs) matched[t] = true;
    for (std::size_t t = 0; t < tracks_.size(); ++t)
        if (!matched[t]) tracks_[t].age_unmatched += static_cast<int>(elapsed);

    auto observe = [&](Track& track, std::size_t d) {
        const auto& det = detections[d];
        track.last_x = det.centroid_x;
        track.last_y = det.centroid_y;
        track.last_matched_frame = frame_index;
        track.age_unmatched = 0;
        track.history.push_back({frame_index, det.centroid_x, det.centroid_y, orientations[d].bit,
                                 orientations[d].degenerate});
        track.decoder.step(orientations[d].bit, frame_index);
    };
    for (auto [t, d] : assignment.pairs) observe(tracks_[t], d);
    for (std::size_t d : assignment.unmatched_detections) {
        Track track{next_id_++, 0, 0, frame_index, 0, {}, DecoderState(decoder_params_)};
        observe(track, d);
        tracks_.push_back(std::move(track));
    }
    return prune(tracks_, params_.max_unmatched_frames);
}

std::vector<Track> Tracker::finish() {
    std::vector<Track> out = std::move(tracks_);
    tracks_.clear();
    return out;
}

DecodeResult decode_track(const Track& track, const Codebook& book) {
    return decode_samples(track.history, book, track.decoder.params());
}

} // namespace irb
