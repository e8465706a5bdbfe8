#include "irbeacon/sequence.hpp"

#include "irbeacon/error.hpp"

#include <json.hpp>

#include <cstdio>

namespace irb {

using nlohmann::json;

std::string frame_file_name(std::int64_t index) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "frame_%06lld.pgm", static_cast<long long>(index));
    return buf;
}

std::string encode_record(const FrameRecord& r) {
    json j;
    j["frame_index"] = r.frame_index;
    j["timestamp_s"] = r.timestamp_s;
    if (r.vehicle_position_m) j["vehicle_position_m"] = *r.vehicle_position_m;
    if (!r.beacons.empty()) {
        json arr = json::array();
        for (const auto& b : r.beacons) {
            arr.push_back({{"beacon_id_bits", b.beacon_id_bits},
                           {"centroid_x", b.centroid_x},
                           {"centroid_y", b.centroid_y},
                           {"visible", b.visible},
                           {"symbol_bit", b.symbol_bit},
                           {"distance_m", b.distance_m}});
        }
        j["beacons"] = std::move(arr);
    }
    return j.dump();
}

FrameRecord decode_record(const std::string& line) {
    try {
        const json j = json::parse(line);
        FrameRecord r;
        r.frame_index = j.at("frame_index").get<std::int64_t>();
        r.timestamp_s = j.at("timestamp_s").get<double>();
        if (j.contains("vehicle_position_m")) r.vehicle_position_m = j["vehicle_position_m"].get<double>();
        if (j.contains("beacons"))
            for (const auto& b : j["beacons"]) {
                BeaconTruth t;
                t.beacon_id_bits = b.at("beacon_id_bits").get<std::string>();
                t.centroid_x = b.at("centroid_x").get<double>();
                t.centroid_y = b.at("centroid_y").get<double>();
                t.visible = b.at("visible").get<bool>();
                t.symbol_bit = b.at("symbol_bit").get<int>();
                t.distance_m = b.value("distance_m", 0.0);
                r.beacons.push_back(std::move(t));
            }
        return r;
    } catch (const json::exception& e) {
        throw DataError(std::string("bad sidecar record: ") + e.what());
    }
}

std::vector<FrameRecord> read_sidecar(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read " + path.string());
    std::vector<FrameRecord> out;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) out.push_back(decode_record(line));
    return out;
}

bool has_ground_truth(const std::vector<FrameRecord>& records) {
    for (const auto& r : records)
        if (r.vehicle_position_m && !r.beacons.empty()) return true;
    return false;
}

SequenceWriter::SequenceWriter(const std::filesystem::path& dir) : dir_(dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    sidecar_.open(dir_ / kSidecarName, std::ios::binary | std::ios::trunc);
    if (!sidecar_) throw IoError("cannot write sequence into " + dir_.string());
}

void SequenceWriter::write(const Frame& frame, const FrameRecord& record) {
    if (last_index_ && frame.index <= *last_index_)
        throw UsageError("frames must be written in increasing index order");
    write_pgm(frame.image, dir_ / frame_file_name(frame.index));
    sidecar_ << encode_record(record) << '\n';
    sidecar_.flush();
    if (!sidecar_) throw IoError("write failed: " + (dir_ / kSidecarName).string());
    last_index_ = frame.index;
}

SequenceReader::SequenceReader(const std::filesystem::path& dir) : dir_(dir) {
    records_ = read_sidecar(dir_ / kSidecarName);
    for (std::size_t i = 1; i < records_.size(); ++i) {
        if (records_[i].frame_index <= records_[i - 1].frame_index)
            throw DataError("sidecar frame indices not increasing at frame " +
                            std::to_string(records_[i].frame_index));
        if (records_[i].timestamp_s <= records_[i - 1].timestamp_s)
            throw DataError("sidecar timestamps not increasing at frame " +
                            std::to_string(records_[i].frame_index));
    }
}

Frame SequenceReader::load(std::size_t i) const {
    const auto& r = records_.at(i);
    const auto path = dir_ / frame_file_name(r.frame_index);
    if (!std::filesystem::exists(path))
        throw DataError("missing frame " + std::to_string(r.frame_index));
    Frame f;
    f.image = read_pgm(path);
    f.index = r.frame_index;
    f.timestamp_s = r.timestamp_s;
    return f;
}

} // namespace irb
