#include "irbeacon/decoder.hpp"

#include "irbeacon/error.hpp"

#include <cmath>
#include <set>

namespace irb {

OrientationEstimate orientation_bit(const CentralMoments& m) {
    if (m.mu11 == 0.0 && m.mu20 == m.mu02) return {0, true};
    const double theta = 0.5 * std::atan2(2.0 * m.mu11, m.mu20 - m.mu02);
    return {theta > 0.0 ? 1 : 0, false};
}

OrientationEstimate orientation_bit(GrayView patch) { return orientation_bit(central_moments(patch)); }

DecoderState::DecoderState(DecoderParams params) : params_(params) {
    if (params_.window < 1 || params_.bit_frames < 1)
        throw UsageError("decoder window and bit period must be positive");
    if (params_.low_threshold > params_.high_threshold)
        throw UsageError("decoder low threshold exceeds high threshold");
    ring_.assign(static_cast<std::size_t>(params_.window), 0);
}

void DecoderState::emit(int bit, std::int64_t frame_index) {
    bits_.push_back(bit ? '1' : '0');
    emit_frames_.push_back(frame_index);
}

int DecoderState::step(int orientation, std::int64_t frame_index) {
    const std::uint8_t sample = orientation ? 1 : 0;
    auto& slot = ring_[static_cast<std::size_t>(head_)];
    if (fill_ == params_.window) sum_ -= slot;
    else ++fill_;
    slot = sample;
    sum_ += sample;
    head_ = (head_ + 1) % params_.window;

    // The trigger only looks at a full window.
    if (fill_ < params_.window) return 0;

    if (sum_ > params_.high_threshold && level_ != TriggerLevel::high) {
        level_ = TriggerLevel::high;
        emit(1, frame_index);
        last_emit_frame_ = frame_index;
        transition_frames_.push_back(frame_index);
        return 1;
    }
    if (sum_ < params_.low_threshold && level_ != TriggerLevel::low) {
        level_ = TriggerLevel::low;
        emit(0, frame_index);
        last_emit_frame_ = frame_index;
        transition_frames_.push_back(frame_index);
        return 1;
    }
    if (level_ == TriggerLevel::undefined || frame_index - last_emit_frame_ < params_.bit_frames) return 0;

    // Repeated symbol: re-sample the held level once per bit period, but only
    // while the window majority still agrees with it. Right before a falling
    // edge the sum sits between the thresholds with the new symbol already in
    // the majority; repeating there would insert a stale bit.
    const bool high = level_ == TriggerLevel::high;
    const bool agrees = high ? 2 * sum_ > params_.window : 2 * sum_ < params_.window;
    if (!agrees) return 0;
    emit(high ? 1 : 0, frame_index);
    last_emit_frame_ += params_.bit_frames;
    return 1;
}

IdentifierCount count_identifier_bits(std::string_view bits, const Codeword& id) {
    const std::string pattern = id.str();
    const std::size_t L = pattern.size();
    IdentifierCount out;
    std::size_t i = 0;
    while (i + L <= bits.size()) {
        if (bits.compare(i, L, pattern) == 0) {
            out.occurrences.push_back(static_cast<int>(i));
            i += L;
        } else {
            ++i;
        }
    }
    if (out.occurrences.empty()) return out;

    const std::string_view pat(pattern);
    const std::size_t first = static_cast<std::size_t>(out.occurrences.front());
    const std::size_t tail_begin = static_cast<std::size_t>(out.occurrences.back()) + L;
    const std::size_t tail_len = bits.size() - tail_begin;
    out.correct = static_cast<int>(L * out.occurrences.size());

    const std::string_view head = bits.substr(0, first);
    if (head.size() < L && pat.substr(L - head.size()) == head) out.correct += static_cast<int>(head.size());
    else out.error += static_cast<int>(head.size());

    const std::string_view tail = bits.substr(tail_begin);
    if (tail_len < L && pat.substr(0, tail_len) == tail) out.correct += static_cast<int>(tail_len);
    else out.error += static_cast<int>(tail_len);

    for (std::size_t k = 1; k < out.occurrences.size(); ++k) {
        const auto gap = static_cast<std::size_t>(out.occurrences[k] - out.occurrences[k - 1]) - L;
        out.error += static_cast<int>(gap);
    }
    return out;
}

IdentifierCount count_cyclic_identifier_bits(std::string_view bits, const Codeword& id, int* rotation) {
    IdentifierCount best;
    int best_rot = 0;
    for (int r = 0; r < id.length(); ++r) {
        auto c = count_identifier_bits(bits, id.rotated(r));
        const bool better = c.occurrences.size() > best.occurrences.size() ||
                            (c.occurrences.size() == best.occurrences.size() && c.error < best.error &&
                             !c.occurrences.empty());
        if (r == 0 || better) {
            best = std::move(c);
            best_rot = r;
        }
    }
    if (rotation) *rotation = best_rot;
    return best;
}

std::vector<int> recognition_points(std::string_view bits, const Codeword& id) {
    const int L = id.length();
    std::vector<int> out;
    if (static_cast<int>(bits.size()) < L) return out;
    const Codeword key = canonical_rotation(id);
    for (int end = L - 1; end < static_cast<int>(bits.size()); ++end) {
        const auto w = Codeword::parse(bits.substr(static_cast<std::size_t>(end - L + 1), static_cast<std::size_t>(L)), L);
        if (canonical_rotation(w) == key) out.push_back(end);
    }
    return out;
}

void match_codebook(DecodeResult& result, const Codebook& book) {
    result.matched_id.reset();
    result.correct_bits = result.error_bits = result.occurrences = 0;
    result.first_match_frame.reset();
    result.last_match_frame.reset();
    if (book.entries.empty()) return;
    const int L = book.entries.front().length();
    if (static_cast<int>(result.bits.size()) < L) return;

    // Only classes that show up in some window can have occurrences.
    std::set<Codeword> candidates;
    for (std::size_t i = 0; i + static_cast<std::size_t>(L) <= result.bits.size(); ++i) {
        const auto w = Codeword::parse(std::string_view(result.bits).substr(i, static_cast<std::size_t>(L)), L);
        if (auto e = contains_cyclic(book, w)) candidates.insert(*e);
    }

    std::optional<IdentifierCount> best;
    for (const auto& entry : candidates) {  // ascending value: ties keep the lowest
        auto c = count_cyclic_identifier_bits(result.bits, entry);
        if (c.occurrences.empty()) continue;
        if (!best || c.occurrences.size() > best->occurrences.size()) {
            best = std::move(c);
            result.matched_id = entry;
        }
    }
    if (!best) return;
    result.correct_bits = best->correct;
    result.error_bits = best->error;
    result.occurrences = static_cast<int>(best->occurrences.size());
    const auto points = recognition_points(result.bits, *result.matched_id);
    if (!points.empty() && !result.emit_frames.empty()) {
        result.first_match_frame = result.emit_frames[static_cast<std::size_t>(points.front())];
        result.last_match_frame = result.emit_frames[static_cast<std::size_t>(points.back())];
    }
}

DecodeResult decode_samples(std::span<const TrackSample> history, const Codebook& book,
                            const DecoderParams& params) {
    if (history.empty()) throw UsageError("cannot decode a track without samples");
    DecoderState state(params);
    for (const auto& s : history) state.step(s.orientation, s.frame_index);
    DecodeResult r;
    r.bits = state.bits();
    r.emit_frames = state.emit_frames();
    match_codebook(r, book);
    return r;
}

} // namespace irb
