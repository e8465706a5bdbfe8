#pragma once

#include "irbeacon/image.hpp"
#include "irbeacon/moments.hpp"

#include <cstdint>
#include <vector>

namespace irb {

struct DetectorParams {
    std::uint8_t binarize_threshold = kDefaultBinarizeThreshold;
    int min_area = 3;    // bounding-box area bounds, inclusive
    int max_area = 400;
    double hu_threshold = 0.2;  // accept when distance < threshold
    int crop_margin = 1;        // grayscale patch = box grown by this margin
    bool reject_border = true;  // drop blobs cut off by the frame edge
};

struct Detection {
    BoundingBox box;
    double centroid_x = 0;  // grayscale centroid, frame coordinates
    double centroid_y = 0;
    double patch_sum = 0;
    double hu_dist = 0;
    std::int64_t frame_index = 0;
    CentralMoments moments;  // of the grayscale patch
};

/// The canonical shape template: an anti-aliased "\" bar of 4:1 aspect
/// spanning 90% of the diagonal of a size x size patch, peak 255.
GrayImage render_reference_symbol(int size = 21);

/// Hu invariants of render_reference_symbol(); computed once.
const HuFeature& reference_hu();

/// Box grown by `margin` pixels and clamped to the frame.
BoundingBox expand_box(const BoundingBox& box, int margin, int width, int height);

/// Connected blobs of the binarized frame whose box area is within bounds
/// (and, with reject_border, that do not touch the frame edge).
std::vector<BoundingBox> propose(const Frame& frame, const DetectorParams& params = {});

/// Proposals whose grayscale patch matches the reference shape.
std::vector<Detection> detect(const Frame& frame, const HuFeature& reference, const DetectorParams& params = {});
inline std::vector<Detection> detect(const Frame& frame, const DetectorParams& params = {}) {
    return detect(frame, reference_hu(), params);
}

} // namespace irb
