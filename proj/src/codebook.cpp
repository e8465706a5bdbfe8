#include "irbeacon/codebook.hpp"

#include "irbeacon/error.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>

namespace irb {

Codeword::Codeword(std::uint32_t value, int length) : value_(value), length_(length) {
    if (length < 1 || length > kMaxLength)
        throw UsageError("codeword length must be in [1, " + std::to_string(kMaxLength) + "]");
    if (value >> length)
        throw UsageError("codeword value does not fit in " + std::to_string(length) + " bits");
}

Codeword Codeword::parse(std::string_view bits, int expected_length) {
    if (static_cast<int>(bits.size()) != expected_length)
        throw UsageError("expected " + std::to_string(expected_length) + " bits, got '" +
                         std::string(bits) + "'");
    std::uint32_t v = 0;
    for (char ch : bits) {
        if (ch != '0' && ch != '1')
            throw UsageError("invalid bit character in '" + std::string(bits) + "'");
        v = (v << 1) | static_cast<std::uint32_t>(ch - '0');
    }
    return Codeword(v, expected_length);
}

Codeword Codeword::rotated(int k) const {
    const int n = length_;
    k %= n;
    if (k < 0) k += n;
    if (k == 0) return *this;
    const std::uint32_t mask = (n == 32) ? ~0u : ((1u << n) - 1u);
    const std::uint32_t v = ((value_ << k) | (value_ >> (n - k))) & mask;
    return Codeword(v, n);
}

std::string Codeword::str() const {
    std::string s(static_cast<std::size_t>(length_), '0');
    for (int i = 0; i < length_; ++i)
        if (bit(i)) s[static_cast<std::size_t>(i)] = '1';
    return s;
}

bool is_ambiguous(const Codeword& c) {
    for (int k = 1; k < c.length(); ++k)
        if (c.rotated(k) == c) return true;
    return false;
}

bool is_ambiguous(std::string_view bits) {
    return is_ambiguous(Codeword::parse(bits, static_cast<int>(bits.size())));
}

Codeword canonical_rotation(const Codeword& c) {
    Codeword best = c;
    for (int k = 1; k < c.length(); ++k)
        best = std::min(best, c.rotated(k));
    return best;
}

bool cyclically_equal(const Codeword& a, const Codeword& b) {
    return a.length() == b.length() && canonical_rotation(a) == canonical_rotation(b);
}

Codebook generate_codebook(int length) {
    if (length < 1 || length > Codeword::kMaxLength)
        throw UsageError("codebook length out of range");
    Codebook book;
    const std::uint32_t count = 1u << length;
    for (std::uint32_t v = 0; v < count; ++v) {
        const Codeword c(v, length);
        // Fixed-width values order like their bit strings, so the smallest
        // rotation is also the lexicographically smallest one.
        if (!is_ambiguous(c) && canonical_rotation(c) == c) book.entries.push_back(c);
    }
    return book;
}

std::optional<Codeword> contains_cyclic(const Codebook& book, const Codeword& bits) {
    const Codeword key = canonical_rotation(bits);
    auto it = std::lower_bound(book.entries.begin(), book.entries.end(), key);
    if (it != book.entries.end() && *it == key) return *it;
    // Files written by other tools may store a non-canonical rotation.
    for (const auto& e : book.entries)
        if (cyclically_equal(e, bits)) return e;
    return std::nullopt;
}

void write_codebook(const Codebook& book, std::ostream& out) {
    out << "# " << Codebook::kVersionTag << '\n';
    for (const auto& c : book.entries) out << c.str() << '\n';
}

void write_codebook(const Codebook& book, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write codebook: " + path.string());
    write_codebook(book, out);
    if (!out) throw IoError("write failed: " + path.string());
}

Codebook read_codebook(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != std::string("# ") + Codebook::kVersionTag)
        throw DataError("codebook header must be '# " + std::string(Codebook::kVersionTag) + "'");
    Codebook book;
    std::set<Codeword> classes;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        Codeword c;
        try {
            c = Codeword::parse(line);
        } catch (const UsageError& e) {
            throw DataError("codebook line " + std::to_string(line_no) + ": " + e.what());
        }
        if (is_ambiguous(c))
            throw DataError("codebook line " + std::to_string(line_no) + ": self-periodic identifier " + line);
        if (!classes.insert(canonical_rotation(c)).second)
            throw DataError("codebook line " + std::to_string(line_no) + ": " + line +
                            " is a rotation of an earlier entry");
        book.entries.push_back(c);
    }
    std::sort(book.entries.begin(), book.entries.end());
    return book;
}

Codebook read_codebook(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read codebook: " + path.string());
    return read_codebook(in);
}

} // namespace irb
