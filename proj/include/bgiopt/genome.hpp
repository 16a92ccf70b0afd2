#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace bgi {

/// Fixed-length bit vector over zones; bit i switches zone index i+1 on.
///
/// Hex form: the genome read as an unsigned integer with bit i worth 2^i,
/// written most-significant digit first, zero-padded to ceil(n/4) digits.
class Genome {
public:
    Genome() = default;
    explicit Genome(std::size_t n, bool value = false) : bits_(n, value ? 1 : 0) {}

    static Genome from_hex(std::string_view hex, std::size_t n);
    static Genome from_bits(std::string_view bits); // "0101..." with bit 0 first

    std::size_t size() const { return bits_.size(); }
    bool operator[](std::size_t i) const { return bits_[i] != 0; }
    void set(std::size_t i, bool v) { bits_[i] = v ? 1 : 0; }
    void flip(std::size_t i) { bits_[i] ^= 1; }
    std::size_t count() const;
    bool none() const { return count() == 0; }
    bool all() const { return count() == size(); }

    std::string to_hex() const;
    const std::vector<std::uint8_t>& bytes() const { return bits_; }

    bool operator==(const Genome&) const = default;
    auto operator<=>(const Genome&) const = default;

private:
    std::vector<std::uint8_t> bits_;
};

} // namespace bgi
