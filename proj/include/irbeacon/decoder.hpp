#pragma once

#include "irbeacon/codebook.hpp"
#include "irbeacon/moments.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace irb {

struct OrientationEstimate {
    int bit = 0;
    bool degenerate = false;  // symmetric patch, angle undefined
};

/// theta = atan2(2 mu11, mu20 - mu02) / 2 in image coordinates (y down);
/// bit 1 iff theta > 0, i.e. a "\" bar.
OrientationEstimate orientation_bit(const CentralMoments& m);
OrientationEstimate orientation_bit(GrayView patch);

struct DecoderParams {
    int window = 7;          // orientation samples summed
    int low_threshold = 2;   // k1: level goes low when the sum falls below it
    int high_threshold = 4;  // k2: level goes high when the sum exceeds it
    int bit_frames = 7;      // frames per transmitted bit (70 ms at 100 Hz)
};

enum class TriggerLevel : std::uint8_t { undefined, low, high };

/// Sliding-window sum feeding a Schmitt trigger, one instance per track.
class DecoderState {
public:
    explicit DecoderState(DecoderParams params = {});

    /// Pushes one orientation sample taken at frame_index. Returns the number
    /// of bits appended (0 or 1).
    int step(int orientation, std::int64_t frame_index);

    const std::string& bits() const { return bits_; }
    /// Frame index at which each bit of bits() was emitted.
    const std::vector<std::int64_t>& emit_frames() const { return emit_frames_; }
    const std::vector<std::int64_t>& transition_frames() const { return transition_frames_; }
    TriggerLevel level() const { return level_; }
    int window_sum() const { return sum_; }
    int window_fill() const { return fill_; }
    const DecoderParams& params() const { return params_; }

private:
    void emit(int bit, std::int64_t frame_index);

    DecoderParams params_;
    std::vector<std::uint8_t> ring_;
    int head_ = 0;
    int fill_ = 0;
    int sum_ = 0;
    TriggerLevel level_ = TriggerLevel::undefined;
    std::int64_t last_emit_frame_ = 0;
    std::string bits_;
    std::vector<std::int64_t> emit_frames_;
    std::vector<std::int64_t> transition_frames_;
};

struct IdentifierCount {
    int correct = 0;
    int error = 0;
    std::vector<int> occurrences;  // start offsets of replaced identifiers
};

/// Replaces non-overlapping occurrences of `id` left to right. The leading
/// fragment counts as correct iff it is a suffix of `id`, the trailing one iff
/// it is a prefix; every other leftover bit is an error. With no occurrence
/// both counts are zero.
IdentifierCount count_identifier_bits(std::string_view bits, const Codeword& id);

/// count_identifier_bits against the rotation of `id` with the most
/// occurrences (ties: fewer errors, then smaller rotation). `rotation` gets the
/// chosen shift.
IdentifierCount count_cyclic_identifier_bits(std::string_view bits, const Codeword& id, int* rotation = nullptr);

/// Emission indices i (into bits) where bits[i-L+1..i] is a rotation of `id`.
std::vector<int> recognition_points(std::string_view bits, const Codeword& id);

struct DecodeResult {
    std::string bits;
    std::vector<std::int64_t> emit_frames;
    std::optional<Codeword> matched_id;
    int correct_bits = 0;
    int error_bits = 0;
    int occurrences = 0;
    std::optional<std::int64_t> first_match_frame;
    std::optional<std::int64_t> last_match_frame;
};

/// One matched detection of a track.
struct TrackSample {
    std::int64_t frame_index = 0;
    double x = 0;
    double y = 0;
    int orientation = 0;
    bool degenerate = false;
};

/// Searches an emitted bit string for every codebook entry under all
/// rotations and fills matched_id/counts/match frames.
void match_codebook(DecodeResult& result, const Codebook& book);

/// Replays orientation samples through a fresh DecoderState and matches the
/// result against the codebook. Throws UsageError on empty history.
DecodeResult decode_samples(std::span<const TrackSample> history, const Codebook& book,
                            const DecoderParams& params = {});

} // namespace irb
