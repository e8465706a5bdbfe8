#include "irbeacon/components.hpp"

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <numeric>

namespace irb {

namespace {

constexpr int kLinkReach = 3;  // 3x3 dilation on both sides

struct DisjointSet {
    std::vector<int> parent;

    explicit DisjointSet(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }

    int find(int i) {
        while (parent[static_cast<std::size_t>(i)] != i) {
            auto& p = parent[static_cast<std::size_t>(i)];
            p = parent[static_cast<std::size_t>(p)];
            i = p;
        }
        return i;
    }
    // The smaller index wins so roots stay at the blob's first raster pixel.
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (b < a) std::swap(a, b);
        parent[static_cast<std::size_t>(b)] = a;
    }
};

} // namespace

namespace {

struct Pixel {
    int x, y;
};

std::vector<BoundingBox> group(const std::vector<Pixel>& set_pixels, std::vector<int>& row_begin, int height);

} // namespace

std::vector<BoundingBox> connected_components(const BinaryImage& image) {
    std::vector<Pixel> set_pixels;
    std::vector<int> row_begin(static_cast<std::size_t>(image.height) + 1, 0);
    for (int y = 0; y < image.height; ++y) {
        row_begin[static_cast<std::size_t>(y)] = static_cast<int>(set_pixels.size());
        const std::uint8_t* row = image.bits.data() + static_cast<std::size_t>(y) * static_cast<std::size_t>(image.width);
        for (int x = 0; x < image.width; ++x)
            if (row[x]) set_pixels.push_back({x, y});
    }
    return group(set_pixels, row_begin, image.height);
}

std::vector<BoundingBox> connected_components(GrayView image, std::uint8_t threshold) {
    std::vector<Pixel> set_pixels;
    std::vector<int> row_begin(static_cast<std::size_t>(image.height()) + 1, 0);
    // Per byte, ((b & 127) + 128 - threshold) | b has its top bit set when
    // b >= threshold (never a carry); the exact scan rejects false alarms.
    const std::uint64_t bias = 0x0101010101010101ull * static_cast<std::uint8_t>(128 - std::min<int>(threshold, 128));
    constexpr std::uint64_t kTop = 0x8080808080808080ull;
    for (int y = 0; y < image.height(); ++y) {
        row_begin[static_cast<std::size_t>(y)] = static_cast<int>(set_pixels.size());
        const std::uint8_t* row = image.row(y);
        int x = 0;
        if (threshold > 0) {
            for (; x + 8 <= image.width(); x += 8) {
                std::uint64_t word;
                std::memcpy(&word, row + x, sizeof word);
                if (!((((word & ~kTop) + bias) | word) & kTop)) continue;
                for (int k = x; k < x + 8; ++k)
                    if (row[k] >= threshold) set_pixels.push_back({k, y});
            }
        }
        for (; x < image.width(); ++x)
            if (row[x] >= threshold) set_pixels.push_back({x, y});
    }
    return group(set_pixels, row_begin, image.height());
}

namespace {

std::vector<BoundingBox> group(const std::vector<Pixel>& set_pixels, std::vector<int>& row_begin, int height) {
    row_begin[static_cast<std::size_t>(height)] = static_cast<int>(set_pixels.size());
    if (set_pixels.empty()) return {};

    DisjointSet sets(set_pixels.size());
    auto x_less = [](const Pixel& p, int x) { return p.x < x; };
    for (int i = 0; i < static_cast<int>(set_pixels.size()); ++i) {
        const Pixel p = set_pixels[static_cast<std::size_t>(i)];
        for (int y = std::max(0, p.y - kLinkReach); y <= p.y; ++y) {
            auto first = set_pixels.begin() + row_begin[static_cast<std::size_t>(y)];
            auto last = (y == p.y) ? set_pixels.begin() + i : set_pixels.begin() + row_begin[static_cast<std::size_t>(y) + 1];
            auto it = std::lower_bound(first, last, p.x - kLinkReach, x_less);
            for (; it != last && it->x <= p.x + kLinkReach; ++it)
                sets.unite(i, static_cast<int>(it - set_pixels.begin()));
        }
    }

    std::vector<int> slot(set_pixels.size(), -1);
    std::vector<BoundingBox> boxes;
    std::vector<int> x1, y1;
    for (int i = 0; i < static_cast<int>(set_pixels.size()); ++i) {
        const int root = sets.find(i);
        const Pixel p = set_pixels[static_cast<std::size_t>(i)];
        int& s = slot[static_cast<std::size_t>(root)];
        if (s < 0) {
            s = static_cast<int>(boxes.size());
            boxes.push_back({p.x, p.y, 1, 1});
            x1.push_back(p.x);
            y1.push_back(p.y);
            continue;
        }
        auto& b = boxes[static_cast<std::size_t>(s)];
        b.x = std::min(b.x, p.x);
        x1[static_cast<std::size_t>(s)] = std::max(x1[static_cast<std::size_t>(s)], p.x);
        y1[static_cast<std::size_t>(s)] = std::max(y1[static_cast<std::size_t>(s)], p.y);
    }
    for (std::size_t k = 0; k < boxes.size(); ++k) {
        boxes[k].w = x1[k] - boxes[k].x + 1;
        boxes[k].h = y1[k] - boxes[k].y + 1;
    }
    return boxes;
}

} // namespace

} // namespace irb
