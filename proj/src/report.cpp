#include "irbeacon/error.hpp"
#include "irbeacon/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

namespace irb {

namespace {

constexpr const char* kRunHeader = "# beacon-run v1";
constexpr const char* kMetricsHeader = "# beacon-metrics v1";

std::string fixed(double v, int digits = 2) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::string opt_frame(const std::optional<std::int64_t>& f) { return f ? std::to_string(*f) : "-"; }

std::int64_t parse_i64(std::string_view s) {
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) throw DataError("bad integer '" + std::string(s) + "'");
    return v;
}

std::map<std::string, std::string> fields(std::istringstream& ss) {
    std::map<std::string, std::string> kv;
    for (std::string tok; ss >> tok;) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) throw DataError("expected key=value, got '" + tok + "'");
        kv[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
    return kv;
}

const std::string& need(const std::map<std::string, std::string>& kv, const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end()) throw DataError("missing field '" + key + "'");
    return it->second;
}

} // namespace

RunMetrics evaluate(const RunResult& run, const std::vector<FrameRecord>& truth) {
    RunMetrics m;
    m.frames = run.frames;
    m.detections = run.detections;
    m.tracks = static_cast<std::int64_t>(run.tracks.size());
    if (!has_ground_truth(truth)) return m;

    std::map<std::int64_t, double> position;
    std::vector<Codeword> ids;
    for (const auto& r : truth) {
        if (r.vehicle_position_m) position[r.frame_index] = *r.vehicle_position_m;
        for (const auto& b : r.beacons) {
            const auto id = Codeword::parse(b.beacon_id_bits);
            if (std::none_of(ids.begin(), ids.end(), [&](const Codeword& c) { return c == id; })) ids.push_back(id);
        }
    }
    auto pos_at = [&](std::int64_t frame) -> std::optional<double> {
        auto it = position.find(frame);
        if (it == position.end()) return std::nullopt;
        return it->second;
    };

    std::vector<bool> matched(run.tracks.size(), false);
    for (const auto& id : ids) {
        BeaconMetrics b;
        b.id_bits = id.str();
        std::optional<std::int64_t> first, last;
        for (std::size_t t = 0; t < run.tracks.size(); ++t) {
            // A track generates the beacon when its bits hold the identifier at
            // least once, whatever codeword the codebook search preferred.
            const auto& d = run.tracks[t].decode;
            const auto c = count_cyclic_identifier_bits(d.bits, id);
            if (c.occurrences.empty()) continue;
            matched[t] = true;
            ++b.tracks_matching;
            b.bits_decoded += static_cast<int>(d.bits.size());
            b.error_bits += c.error;
            b.occurrences += static_cast<int>(c.occurrences.size());
            const auto points = recognition_points(d.bits, id);
            if (points.empty() || d.emit_frames.size() != d.bits.size()) continue;
            const auto f0 = d.emit_frames[static_cast<std::size_t>(points.front())];
            const auto f1 = d.emit_frames[static_cast<std::size_t>(points.back())];
            if (!first || f0 < *first) first = f0;
            if (!last || f1 > *last) last = f1;
        }
        if (first) b.first_recognition_m = pos_at(*first);
        if (last) b.last_recognition_m = pos_at(*last);
        m.beacons.push_back(b);
    }
    for (std::size_t t = 0; t < run.tracks.size(); ++t)
        if (!matched[t]) m.unmatched_tracks.push_back(run.tracks[t].track_id);
    return m;
}

void write_run_record(const RunResult& run, std::ostream& out) {
    out << kRunHeader << '\n';
    out << "run frames=" << run.frames << " detections=" << run.detections << " tracks=" << run.tracks.size() << '\n';
    for (const auto& t : run.tracks) {
        const auto& d = t.decode;
        out << "track id=" << t.track_id << " samples=" << t.samples << " first_frame=" << t.first_frame
            << " last_frame=" << t.last_frame << " matched=" << (d.matched_id ? d.matched_id->str() : "-")
            << " bits=" << (d.bits.empty() ? "-" : d.bits) << " correct=" << d.correct_bits << " errors=" << d.error_bits
            << " occurrences=" << d.occurrences << " first_match=" << opt_frame(d.first_match_frame)
            << " last_match=" << opt_frame(d.last_match_frame) << " emits=";
        if (d.emit_frames.empty()) out << '-';
        for (std::size_t i = 0; i < d.emit_frames.size(); ++i) out << (i ? "," : "") << d.emit_frames[i];
        out << '\n';
    }
}

RunResult read_run_record(std::istream& in) {
    RunResult r;
    std::string line;
    if (!std::getline(in, line)) return r;  // empty record
    if (line != kRunHeader) throw DataError("not a run record (missing '" + std::string(kRunHeader) + "')");
    bool have_run = false;
    std::size_t expected_tracks = 0;
    for (int n = 2; std::getline(in, line); ++n) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string kind;
        ss >> kind;
        try {
            const auto kv = fields(ss);
            if (kind == "run") {
                r.frames = parse_i64(need(kv, "frames"));
                r.detections = parse_i64(need(kv, "detections"));
                expected_tracks = static_cast<std::size_t>(parse_i64(need(kv, "tracks")));
                have_run = true;
            } else if (kind == "track") {
                TrackReport t;
                t.track_id = static_cast<int>(parse_i64(need(kv, "id")));
                t.samples = static_cast<int>(parse_i64(need(kv, "samples")));
                t.first_frame = parse_i64(need(kv, "first_frame"));
                t.last_frame = parse_i64(need(kv, "last_frame"));
                auto& d = t.decode;
                const auto& bits = need(kv, "bits");
                if (bits != "-") {
                    if (bits.find_first_not_of("01") != std::string::npos) throw DataError("bad bit string");
                    d.bits = bits;
                }
                const auto& matched = need(kv, "matched");
                if (matched != "-") d.matched_id = Codeword::parse(matched);
                d.correct_bits = static_cast<int>(parse_i64(need(kv, "correct")));
                d.error_bits = static_cast<int>(parse_i64(need(kv, "errors")));
                d.occurrences = static_cast<int>(parse_i64(need(kv, "occurrences")));
                if (need(kv, "first_match") != "-") d.first_match_frame = parse_i64(need(kv, "first_match"));
                if (need(kv, "last_match") != "-") d.last_match_frame = parse_i64(need(kv, "last_match"));
                const auto& emits = need(kv, "emits");
                if (emits != "-") {
                    std::string_view rest(emits);
                    while (!rest.empty()) {
                        const auto comma = rest.find(',');
                        d.emit_frames.push_back(parse_i64(rest.substr(0, comma)));
                        rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
                    }
                }
                if (d.emit_frames.size() != d.bits.size()) throw DataError("emit frame count differs from bit count");
                r.tracks.push_back(std::move(t));
            } else {
                throw DataError("unknown record '" + kind + "'");
            }
        } catch (const DataError& e) {
            throw DataError("run record line " + std::to_string(n) + ": " + e.what());
        } catch (const UsageError& e) {
            throw DataError("run record line " + std::to_string(n) + ": " + e.what());
        }
    }
    if (!have_run) throw DataError("run record has no 'run' line");
    if (expected_tracks != r.tracks.size()) throw DataError("run record track count mismatch");
    return r;
}

void print_metrics_table(const RunMetrics& m, std::ostream& out) {
    std::vector<std::pair<std::string, std::string>> rows{
        {"Frames", std::to_string(m.frames)},
        {"Detections", std::to_string(m.detections)},
        {"Tracks", std::to_string(m.tracks)},
    };
    auto dist = [](const std::optional<double>& v) { return v ? fixed(*v, 1) + " m" : std::string("-"); };
    for (std::size_t i = 0; i < m.beacons.size(); ++i) {
        const auto& b = m.beacons[i];
        const std::string tag = "B" + std::to_string(i + 1) + " ";
        rows.emplace_back(tag + "Identifier", b.id_bits);
        rows.emplace_back(tag + "Tracks", std::to_string(b.tracks_matching));
        rows.emplace_back(tag + "First Recognition", dist(b.first_recognition_m));
        rows.emplace_back(tag + "Last Recognition", dist(b.last_recognition_m));
        rows.emplace_back(tag + "Bits Decoded", std::to_string(b.bits_decoded));
        rows.emplace_back(tag + "Error Bits", std::to_string(b.error_bits));
    }
    if (!m.beacons.empty()) rows.emplace_back("Unmatched Tracks", std::to_string(m.unmatched_tracks.size()));
    std::size_t w = 6;
    for (const auto& r : rows) w = std::max(w, r.first.size());
    out << std::left << std::setw(static_cast<int>(w + 2)) << "Metric" << "Value\n";
    for (const auto& r : rows) out << std::left << std::setw(static_cast<int>(w + 2)) << r.first << r.second << '\n';
}

void write_metrics_record(const RunMetrics& m, std::ostream& out) {
    auto dist = [](const std::optional<double>& v) { return v ? fixed(*v, 3) : std::string("-"); };
    out << kMetricsHeader << '\n';
    out << "run frames=" << m.frames << " detections=" << m.detections << " tracks=" << m.tracks << '\n';
    for (const auto& b : m.beacons)
        out << "beacon id=" << b.id_bits << " tracks_matching=" << b.tracks_matching
            << " first_recognition_m=" << dist(b.first_recognition_m)
            << " last_recognition_m=" << dist(b.last_recognition_m) << " bits_decoded=" << b.bits_decoded
            << " error_bits=" << b.error_bits << " occurrences=" << b.occurrences << '\n';
    for (int id : m.unmatched_tracks) out << "unmatched_track id=" << id << '\n';
}

} // namespace irb
