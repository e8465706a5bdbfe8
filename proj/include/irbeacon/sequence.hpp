#pragma once

#include "irbeacon/image.hpp"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

namespace irb {

/// Ground truth for one beacon in one frame (simulator output only).
struct BeaconTruth {
    std::string beacon_id_bits;
    double centroid_x = 0;
    double centroid_y = 0;
    bool visible = false;
    int symbol_bit = 0;
    double distance_m = 0;
};

/// One line of the sequence sidecar.
struct FrameRecord {
    std::int64_t frame_index = 0;
    double timestamp_s = 0;
    std::optional<double> vehicle_position_m;  // absent for real recordings
    std::vector<BeaconTruth> beacons;
};

inline constexpr const char* kSidecarName = "sequence.jsonl";

std::string frame_file_name(std::int64_t index);  // frame_%06d.pgm

std::string encode_record(const FrameRecord& r);
/// Throws DataError on malformed records.
FrameRecord decode_record(const std::string& line);

/// Reads every record of a sidecar file, in file order.
std::vector<FrameRecord> read_sidecar(const std::filesystem::path& path);

/// True when any record carries vehicle position and beacon truth.
bool has_ground_truth(const std::vector<FrameRecord>& records);

/// Writes frames and sidecar into a directory; frames must arrive in index order.
class SequenceWriter {
public:
    explicit SequenceWriter(const std::filesystem::path& dir);
    void write(const Frame& frame, const FrameRecord& record);

private:
    std::filesystem::path dir_;
    std::ofstream sidecar_;
    std::optional<std::int64_t> last_index_;
};

/// Iterates frames of a sequence directory in sidecar order.
class SequenceReader {
public:
    /// Throws IoError if the sidecar is missing, DataError if it is malformed
    /// or indices/timestamps are not strictly increasing.
    explicit SequenceReader(const std::filesystem::path& dir);

    const std::vector<FrameRecord>& records() const { return records_; }
    std::size_t size() const { return records_.size(); }
    /// Loads frame i; throws DataError naming the frame index if its file is absent.
    Frame load(std::size_t i) const;

private:
    std::filesystem::path dir_;
    std::vector<FrameRecord> records_;
};

} // namespace irb
