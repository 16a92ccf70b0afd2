#include "bgiopt/genome.hpp"

#include "bgiopt/errors.hpp"

#include <algorithm>

namespace bgi {

std::size_t Genome::count() const
{
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

std::string Genome::to_hex() const
{
    static constexpr char digits[] = "0123456789abcdef";
    const std::size_t n_digits = (bits_.size() + 3) / 4;
    std::string out(n_digits, '0');
    for (std::size_t d = 0; d < n_digits; ++d) {
        unsigned v = 0;
        for (std::size_t b = 0; b < 4; ++b) {
            const std::size_t i = 4 * d + b;
            if (i < bits_.size() && bits_[i] != 0) {
                v |= 1u << b;
            }
        }
        out[n_digits - 1 - d] = digits[v];
    }
    return out;
}

Genome Genome::from_hex(std::string_view hex, std::size_t n)
{
    if (hex.starts_with("0x") || hex.starts_with("0X")) {
        hex.remove_prefix(2);
    }
    const std::size_t n_digits = (n + 3) / 4;
    if (hex.size() != n_digits) {
        throw InputError("genome hex '" + std::string(hex) + "' must have " + std::to_string(n_digits) +
                         " digits for " + std::to_string(n) + " zones");
    }
    Genome g(n);
    for (std::size_t d = 0; d < n_digits; ++d) {
        const char ch = hex[n_digits - 1 - d];
        unsigned v = 0;
        if (ch >= '0' && ch <= '9') {
            v = static_cast<unsigned>(ch - '0');
        } else if (ch >= 'a' && ch <= 'f') {
            v = static_cast<unsigned>(ch - 'a' + 10);
        } else if (ch >= 'A' && ch <= 'F') {
            v = static_cast<unsigned>(ch - 'A' + 10);
        } else {
            throw InputError("invalid hex digit '" + std::string(1, ch) + "' in genome");
        }
        for (std::size_t b = 0; b < 4; ++b) {
            if ((v >> b) & 1u) {
                const std::size_t i = 4 * d + b;
                if (i >= n) {
                    throw InputError("genome hex sets a bit beyond zone " + std::to_string(n));
                }
                g.bits_[i] = 1;
            }
        }
    }
    return g;
}

Genome Genome::from_bits(std::string_view bits)
{
    Genome g(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] != '0' && bits[i] != '1') {
            throw InputError("genome bit string may only contain 0 and 1");
        }
        g.bits_[i] = bits[i] == '1' ? 1 : 0;
    }
    return g;
}

} // namespace bgi
