#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace irb {

struct BoundingBox {
    int x = 0;  // top-left column
    int y = 0;  // top-left row
    int w = 1;
    int h = 1;

    int area() const { return w * h; }
    double center_x() const { return x + 0.5 * (w - 1); }
    double center_y() const { return y + 0.5 * (h - 1); }

    friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

/// Non-owning view of an 8-bit grayscale region with row stride.
class GrayView {
public:
    GrayView() = default;
    GrayView(std::span<const std::uint8_t> data, int width, int height, int stride)
        : data_(data), width_(width), height_(height), stride_(stride) {}

    int width() const { return width_; }
    int height() const { return height_; }
    std::uint8_t operator()(int x, int y) const {
        return data_[static_cast<std::size_t>(y) * static_cast<std::size_t>(stride_) +
                     static_cast<std::size_t>(x)];
    }
    const std::uint8_t* row(int y) const {
        return data_.data() + static_cast<std::size_t>(y) * static_cast<std::size_t>(stride_);
    }
    /// Sub-region; the box must lie inside this view.
    GrayView crop(const BoundingBox& box) const;

private:
    std::span<const std::uint8_t> data_;
    int width_ = 0;
    int height_ = 0;
    int stride_ = 0;
};

/// Owning row-major 8-bit image.
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;

    GrayImage() = default;
    GrayImage(int w, int h, std::uint8_t fill = 0);

    std::uint8_t& at(int x, int y) {
        return pixels[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                      static_cast<std::size_t>(x)];
    }
    std::uint8_t at(int x, int y) const {
        return pixels[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                      static_cast<std::size_t>(x)];
    }
    GrayView view() const { return GrayView(pixels, width, height, width); }
};

/// One camera image of a sequence.
struct Frame {
    static constexpr int kDefaultWidth = 1600;
    static constexpr int kDefaultHeight = 1200;

    GrayImage image;
    std::int64_t index = 0;
    double timestamp_s = 0.0;

    int width() const { return image.width; }
    int height() const { return image.height; }
    GrayView view() const { return image.view(); }
};

/// 0/1 image produced by thresholding.
struct BinaryImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> bits;

    std::uint8_t at(int x, int y) const {
        return bits[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                    static_cast<std::size_t>(x)];
    }
};

inline constexpr std::uint8_t kDefaultBinarizeThreshold = 5;

/// Pixel is 1 iff intensity >= threshold.
BinaryImage binarize(GrayView image, std::uint8_t threshold = kDefaultBinarizeThreshold);
inline BinaryImage binarize(const Frame& frame, std::uint8_t threshold = kDefaultBinarizeThreshold) {
    return binarize(frame.view(), threshold);
}

/// Binary P5 PGM with maxval 255.
void write_pgm(const GrayImage& image, const std::filesystem::path& path);
GrayImage read_pgm(const std::filesystem::path& path);
std::vector<std::uint8_t> encode_pgm(const GrayImage& image);
GrayImage decode_pgm(std::span<const std::uint8_t> bytes);

} // namespace irb
