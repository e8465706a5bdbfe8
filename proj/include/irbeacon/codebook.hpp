#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace irb {

/// Beacon identifier: a fixed-length bit string, most significant bit sent first.
class Codeword {
public:
    static constexpr int kDefaultLength = 12;
    static constexpr int kMaxLength = 24;

    Codeword() = default;
    /// Throws UsageError if length is outside [1, kMaxLength] or value does not fit.
    Codeword(std::uint32_t value, int length = kDefaultLength);

    /// Parses a string of '0'/'1' characters. Throws UsageError on bad characters
    /// or when the length differs from expected_length.
    static Codeword parse(std::string_view bits, int expected_length = kDefaultLength);

    std::uint32_t value() const { return value_; }
    int length() const { return length_; }

    /// Bit at position i, counted from the first transmitted bit.
    int bit(int i) const { return static_cast<int>((value_ >> (length_ - 1 - i)) & 1u); }

    /// Left rotation by k: bit k becomes the first bit.
    Codeword rotated(int k) const;

    std::string str() const;

    friend bool operator==(const Codeword&, const Codeword&) = default;
    friend auto operator<=>(const Codeword& a, const Codeword& b) {
        if (a.length_ != b.length_) return a.length_ <=> b.length_;
        return a.value_ <=> b.value_;
    }

private:
    std::uint32_t value_ = 0;
    int length_ = kDefaultLength;
};

/// True iff some proper rotation of the codeword equals the codeword itself.
/// Such identifiers cannot be told apart from a shifted copy when repeated.
bool is_ambiguous(const Codeword& c);
bool is_ambiguous(std::string_view bits);

/// Lexicographically smallest rotation.
Codeword canonical_rotation(const Codeword& c);

bool cyclically_equal(const Codeword& a, const Codeword& b);

struct Codebook {
    static constexpr const char* kVersionTag = "beacon-codebook v1";

    std::vector<Codeword> entries;  // ascending by value, one per rotation class
    std::string version = kVersionTag;
};

/// Every aperiodic rotation class of `length`-bit strings, represented by its
/// smallest rotation, sorted ascending.
Codebook generate_codebook(int length = Codeword::kDefaultLength);

/// Stored entry cyclically equivalent to `bits`, if any.
std::optional<Codeword> contains_cyclic(const Codebook& book, const Codeword& bits);

void write_codebook(const Codebook& book, const std::filesystem::path& path);
void write_codebook(const Codebook& book, std::ostream& out);
Codebook read_codebook(const std::filesystem::path& path);
Codebook read_codebook(std::istream& in);

} // namespace irb
