#pragma once

#include "irbeacon/image.hpp"

#include <vector>

namespace irb {

/// Groups set pixels into blobs and returns their bounding boxes.
///
/// Grouping is equivalent to one 3x3 dilation followed by 8-connected
/// labeling: two set pixels share a blob when a chain of set pixels links them
/// with Chebyshev steps of at most 3. Boxes are the tight bounds of the
/// original (undilated) pixels, ordered by each blob's first pixel in raster
/// order.
std::vector<BoundingBox> connected_components(const BinaryImage& image);
/// Same, over binarize(image, threshold) without materializing it.
std::vector<BoundingBox> connected_components(GrayView image, std::uint8_t threshold);

} // namespace irb
