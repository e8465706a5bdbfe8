#include "irbeacon/image.hpp"

#include "irbeacon/error.hpp"

#include <cctype>
#include <fstream>
#include <iterator>
#include <string>

namespace irb {

GrayView GrayView::crop(const BoundingBox& box) const {
    if (box.x < 0 || box.y < 0 || box.w < 1 || box.h < 1 || box.x + box.w > width_ ||
        box.y + box.h > height_)
        throw UsageError("crop box outside view");
    const std::size_t offset =
        static_cast<std::size_t>(box.y) * static_cast<std::size_t>(stride_) + static_cast<std::size_t>(box.x);
    const std::size_t extent =
        static_cast<std::size_t>(box.h - 1) * static_cast<std::size_t>(stride_) + static_cast<std::size_t>(box.w);
    return GrayView(data_.subspan(offset, extent), box.w, box.h, stride_);
}

GrayImage::GrayImage(int w, int h, std::uint8_t fill)
    : width(w), height(h), pixels(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), fill) {
    if (w < 0 || h < 0) throw UsageError("negative image size");
}

BinaryImage binarize(GrayView image, std::uint8_t threshold) {
    BinaryImage out;
    out.width = image.width();
    out.height = image.height();
    out.bits.resize(static_cast<std::size_t>(out.width) * static_cast<std::size_t>(out.height));
    if (out.bits.empty()) return out;
    for (int y = 0; y < out.height; ++y) {
        const std::uint8_t* __restrict src = image.row(y);
        std::uint8_t* __restrict dst = out.bits.data() + static_cast<std::size_t>(y) * static_cast<std::size_t>(out.width);
        for (int x = 0; x < out.width; ++x) dst[x] = src[x] >= threshold ? 1 : 0;
    }
    return out;
}

std::vector<std::uint8_t> encode_pgm(const GrayImage& image) {
    const std::string header =
        "P5\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.insert(out.end(), image.pixels.begin(), image.pixels.end());
    return out;
}

namespace {

// Header tokens are separated by whitespace; comments are not accepted.
std::string next_token(std::span<const std::uint8_t> bytes, std::size_t& pos) {
    while (pos < bytes.size() && std::isspace(bytes[pos])) ++pos;
    std::string tok;
    while (pos < bytes.size() && !std::isspace(bytes[pos])) tok.push_back(static_cast<char>(bytes[pos++]));
    return tok;
}

int parse_header_int(const std::string& tok, const char* what) {
    if (tok.empty() || tok.size() > 9)
        throw DataError(std::string("PGM: bad ") + what);
    for (char c : tok)
        if (!std::isdigit(static_cast<unsigned char>(c))) throw DataError(std::string("PGM: bad ") + what);
    return std::stoi(tok);
}

} // namespace

GrayImage decode_pgm(std::span<const std::uint8_t> bytes) {
    std::size_t pos = 0;
    if (next_token(bytes, pos) != "P5") throw DataError("PGM: magic must be P5");
    const int w = parse_header_int(next_token(bytes, pos), "width");
    const int h = parse_header_int(next_token(bytes, pos), "height");
    const int maxval = parse_header_int(next_token(bytes, pos), "maxval");
    if (maxval != 255) throw DataError("PGM: maxval must be 255");
    if (w < 1 || h < 1) throw DataError("PGM: empty image");
    // Exactly one whitespace byte separates the header from the raster.
    if (pos >= bytes.size() || !std::isspace(bytes[pos])) throw DataError("PGM: truncated header");
    ++pos;
    const std::size_t n = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
    if (bytes.size() - pos != n)
        throw DataError("PGM: raster size " + std::to_string(bytes.size() - pos) + " != " + std::to_string(n));
    GrayImage img;
    img.width = w;
    img.height = h;
    img.pixels.assign(bytes.begin() + static_cast<std::ptrdiff_t>(pos), bytes.end());
    return img;
}

void write_pgm(const GrayImage& image, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    const auto bytes = encode_pgm(image);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed: " + path.string());
}

GrayImage read_pgm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    try {
        return decode_pgm(bytes);
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

} // namespace irb
