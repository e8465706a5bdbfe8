#include "irbeacon/pipeline.hpp"

#include <algorithm>
#include <chrono>

namespace irb {

Pipeline::Pipeline(Codebook book, PipelineParams params)
    : book_(std::move(book)), params_(params), tracker_(params.tracker, params.decoder) {}

void Pipeline::process(const Frame& frame) {
    const auto dets = detect(frame, params_.detector);
    std::vector<OrientationEstimate> orient;
    orient.reserve(dets.size());
    for (const auto& d : dets) orient.push_back(orientation_bit(d.moments));
    ++frames_;
    detections_ += static_cast<std::int64_t>(dets.size());
    retire(tracker_.update(frame.index, dets, orient));
}

void Pipeline::retire(std::vector<Track>&& tracks) {
    for (auto& t : tracks) {
        TrackReport r;
        r.track_id = t.track_id;
        r.samples = static_cast<int>(t.history.size());
        r.first_frame = t.history.front().frame_index;
        r.last_frame = t.history.back().frame_index;
        r.decode.bits = t.decoder.bits();
        r.decode.emit_frames = t.decoder.emit_frames();
        match_codebook(r.decode, book_);
        done_.push_back(std::move(r));
    }
}

std::vector<TrackReport> Pipeline::finish() {
    retire(tracker_.finish());
    std::sort(done_.begin(), done_.end(), [](const auto& a, const auto& b) { return a.track_id < b.track_id; });
    return std::move(done_);
}

RunResult run_sequence(const SequenceReader& reader, const Codebook& book, const PipelineParams& params) {
    Pipeline p(book, params);
    for (std::size_t i = 0; i < reader.size(); ++i) p.process(reader.load(i));
    RunResult r;
    r.frames = p.frames();
    r.detections = p.detections();
    r.tracks = p.finish();
    return r;
}

BenchResult benchmark(const std::vector<Frame>& frames, const Codebook& book, const PipelineParams& params) {
    Pipeline p(book, params);
    const auto t0 = std::chrono::steady_clock::now();
    for (const auto& f : frames) p.process(f);
    p.finish();
    const auto t1 = std::chrono::steady_clock::now();
    return {static_cast<std::int64_t>(frames.size()), std::chrono::duration<double>(t1 - t0).count()};
}

} // namespace irb
