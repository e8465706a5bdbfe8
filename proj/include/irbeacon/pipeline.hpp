#pragma once

#include "irbeacon/codebook.hpp"
#include "irbeacon/decoder.hpp"
#include "irbeacon/detector.hpp"
#include "irbeacon/sequence.hpp"
#include "irbeacon/tracker.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace irb {

struct PipelineParams {
    DetectorParams detector;
    TrackerParams tracker;
    DecoderParams decoder;
};

/// Decoder output of one finished track.
struct TrackReport {
    int track_id = 0;
    int samples = 0;
    std::int64_t first_frame = 0;
    std::int64_t last_frame = 0;
    DecodeResult decode;
};

/// detect -> associate -> decode, one frame at a time.
class Pipeline {
public:
    explicit Pipeline(Codebook book, PipelineParams params = {});

    void process(const Frame& frame);
    /// Retires all live tracks; returns every track report ordered by id.
    std::vector<TrackReport> finish();

    std::int64_t frames() const { return frames_; }
    std::int64_t detections() const { return detections_; }

private:
    void retire(std::vector<Track>&& tracks);

    Codebook book_;
    PipelineParams params_;
    Tracker tracker_;
    std::int64_t frames_ = 0;
    std::int64_t detections_ = 0;
    std::vector<TrackReport> done_;
};

struct RunResult {
    std::int64_t frames = 0;
    std::int64_t detections = 0;
    std::vector<TrackReport> tracks;
};

/// Runs the pipeline over every frame of a sequence directory.
RunResult run_sequence(const SequenceReader& reader, const Codebook& book, const PipelineParams& params = {});

/// Per-beacon comparison against ground truth.
struct BeaconMetrics {
    std::string id_bits;
    int tracks_matching = 0;
    std::optional<double> first_recognition_m;  // vehicle position at the first full identifier
    std::optional<double> last_recognition_m;
    int bits_decoded = 0;
    int error_bits = 0;
    int occurrences = 0;
};

struct RunMetrics {
    std::int64_t frames = 0;
    std::int64_t detections = 0;
    std::int64_t tracks = 0;
    std::vector<BeaconMetrics> beacons;     // empty without ground truth
    std::vector<int> unmatched_tracks;      // decoded tracks matching no scene beacon
};

/// Joins track reports to ground-truth records. Beacons are taken from the
/// records in order of first appearance; a track matches every beacon whose
/// identifier occurs in its bits under some rotation.
RunMetrics evaluate(const RunResult& run, const std::vector<FrameRecord>& truth);

/// Machine-readable record of a run (one line per item).
void write_run_record(const RunResult& run, std::ostream& out);
/// Throws DataError on malformed input.
RunResult read_run_record(std::istream& in);

/// Aligned text table with Frames / Detections / Tracks / per-beacon rows.
void print_metrics_table(const RunMetrics& m, std::ostream& out);
/// Line-oriented form of RunMetrics.
void write_metrics_record(const RunMetrics& m, std::ostream& out);

struct BenchResult {
    std::int64_t frames = 0;
    double seconds = 0;
    double fps() const { return seconds > 0 ? static_cast<double>(frames) / seconds : 0; }
};

/// Times the pipeline alone over pre-rendered frames.
BenchResult benchmark(const std::vector<Frame>& frames, const Codebook& book, const PipelineParams& params = {});

} // namespace irb
