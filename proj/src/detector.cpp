#include "irbeacon/detector.hpp"

#include "irbeacon/components.hpp"
#include "irbeacon/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace irb {

GrayImage render_reference_symbol(int size) {
    if (size < 3) throw UsageError("reference symbol needs at least 3x3 pixels");
    constexpr int kSub = 8;
    const double c = 0.5 * size;
    const double half_len = 0.45 * size * std::numbers::sqrt2;
    const double half_width = half_len / 4.0;
    GrayImage img(size, size);
    for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x) {
            int covered = 0;
            for (int sy = 0; sy < kSub; ++sy)
                for (int sx = 0; sx < kSub; ++sx) {
                    const double px = x + (sx + 0.5) / kSub - c;
                    const double py = y + (sy + 0.5) / kSub - c;
                    const double along = (px + py) / std::numbers::sqrt2;
                    const double across = (py - px) / std::numbers::sqrt2;
                    if (std::abs(along) <= half_len && std::abs(across) <= half_width) ++covered;
                }
            img.at(x, y) = static_cast<std::uint8_t>(std::lround(255.0 * covered / (kSub * kSub)));
        }
    return img;
}

const HuFeature& reference_hu() {
    static const HuFeature h = hu_features(render_reference_symbol().view());
    return h;
}

BoundingBox expand_box(const BoundingBox& box, int margin, int width, int height) {
    const int x0 = std::max(0, box.x - margin);
    const int y0 = std::max(0, box.y - margin);
    const int x1 = std::min(width - 1, box.x + box.w - 1 + margin);
    const int y1 = std::min(height - 1, box.y + box.h - 1 + margin);
    return {x0, y0, x1 - x0 + 1, y1 - y0 + 1};
}

std::vector<BoundingBox> propose(const Frame& frame, const DetectorParams& params) {
    auto boxes = connected_components(frame.view(), params.binarize_threshold);
    const int w = frame.width(), h = frame.height();
    std::erase_if(boxes, [&](const BoundingBox& b) {
        if (b.area() < params.min_area || b.area() > params.max_area) return true;
        return params.reject_border && (b.x == 0 || b.y == 0 || b.x + b.w == w || b.y + b.h == h);
    });
    return boxes;
}

std::vector<Detection> detect(const Frame& frame, const HuFeature& reference, const DetectorParams& params) {
    if (!(params.hu_threshold > 0)) throw UsageError("Hu threshold must be positive");
    std::vector<Detection> out;
    for (const auto& box : propose(frame, params)) {
        const BoundingBox crop = expand_box(box, params.crop_margin, frame.width(), frame.height());
        CentralMoments m;
        try {
            m = central_moments(frame.view().crop(crop));
        } catch (const DegeneratePatch&) {
            continue;  // cannot happen for a box around thresholded pixels
        }
        const double d = hu_distance(hu_features(m), reference);
        if (!(d < params.hu_threshold)) continue;
        Detection det;
        det.box = box;
        det.centroid_x = crop.x + m.xbar;
        det.centroid_y = crop.y + m.ybar;
        det.patch_sum = m.m00;
        det.hu_dist = d;
        det.frame_index = frame.index;
        det.moments = m;
        out.push_back(det);
    }
    return out;
}

} // namespace irb
