#pragma once

#include <cstdint>
#include <cstddef>
#include <stdexcept>

#include "bitword.hpp"

namespace grandsim {

// CRC over GF(2), MSB-first long division, zero initial register and no final
// xor so that the map message -> remainder stays linear (appending the CRC to
// a message keeps the overall codebook a linear code).
struct CrcSpec {
    int width = 0;        // degree d of the generator polynomial
    uint64_t poly = 0;    // coefficient mask of x^{d-1}..x^0; x^d term implicit

    bool empty() const { return width == 0; }

    static CrcSpec crc11() {
        // x^11 + x^10 + x^9 + x^5 + 1
        return CrcSpec{11, 0x621};
    }

    void validate() const {
        if (width < 0 || width > 63) throw std::invalid_argument("CrcSpec: width out of range");
        if (width > 0 && !(poly & 1)) throw std::invalid_argument("CrcSpec: constant term must be 1");
        if (width > 0 && (poly >> width)) throw std::invalid_argument("CrcSpec: poly wider than width");
    }
};

// Remainder of msg(x)·x^width mod g(x), first message bit = highest power.
inline uint64_t crc_remainder(const CrcSpec& spec, const BitWord& msg,
                              std::size_t first, std::size_t count) {
    uint64_t reg = 0;
    uint64_t top = uint64_t(1) << (spec.width - 1);
    uint64_t mask = (spec.width == 63) ? ~uint64_t(0) >> 1 : (uint64_t(1) << spec.width) - 1;
    for (std::size_t i = 0; i < count; ++i) {
        bool fb = ((reg & top) != 0) ^ msg.get(first + i);
        reg = (reg << 1) & mask;
        if (fb) reg ^= spec.poly;
    }
    return reg;
}

// msg || crc, crc bits appended most significant first.
inline BitWord crc_append(const CrcSpec& spec, const BitWord& msg) {
    BitWord out(msg.size() + std::size_t(spec.width));
    for (std::size_t i = 0; i < msg.size(); ++i) out.set(i, msg.get(i));
    uint64_t rem = crc_remainder(spec, msg, 0, msg.size());
    for (int b = 0; b < spec.width; ++b)
        out.set(msg.size() + std::size_t(b), (rem >> (spec.width - 1 - b)) & 1u);
    return out;
}

// True iff the trailing-width bits are the CRC of the leading bits.
inline bool crc_check(const CrcSpec& spec, const BitWord& word) {
    if (spec.empty()) return true;
    if (word.size() < std::size_t(spec.width)) throw std::invalid_argument("crc_check: word too short");
    return crc_remainder(spec, word, 0, word.size()) == 0;
}

} // namespace grandsim
