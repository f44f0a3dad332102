#pragma once

#include <cstdint>
#include <cstddef>
#include <bit>
#include <vector>
#include <string>
#include <stdexcept>

namespace grandsim {

// Fixed-length GF(2) vector packed into 64-bit words, bit i at word i/64, lane i%64.
class BitWord {
public:
    BitWord() = default;

    explicit BitWord(std::size_t nbits)
        : nbits_(nbits), w_((nbits + 63) / 64, 0) {}

    static BitWord from_bits(const std::vector<uint8_t>& bits) {
        BitWord b(bits.size());
        for (std::size_t i = 0; i < bits.size(); ++i)
            if (bits[i] & 1) b.set(i, true);
        return b;
    }

    // Parse "1011..." (most significant position first is NOT implied; index 0 = first char).
    static BitWord from_string(const std::string& s) {
        BitWord b(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] == '1') b.set(i, true);
            else if (s[i] != '0') throw std::invalid_argument("BitWord: bad bit char");
        }
        return b;
    }

    std::size_t size() const { return nbits_; }
    std::size_t words() const { return w_.size(); }
    uint64_t word(std::size_t i) const { return w_[i]; }
    uint64_t& word(std::size_t i) { return w_[i]; }
    const uint64_t* data() const { return w_.data(); }
    uint64_t* data() { return w_.data(); }

    bool get(std::size_t i) const {
        return (w_[i >> 6] >> (i & 63)) & 1u;
    }
    void set(std::size_t i, bool v) {
        uint64_t m = uint64_t(1) << (i & 63);
        if (v) w_[i >> 6] |= m; else w_[i >> 6] &= ~m;
    }
    void flip(std::size_t i) {
        w_[i >> 6] ^= uint64_t(1) << (i & 63);
    }

    BitWord& operator^=(const BitWord& o) {
        if (o.nbits_ != nbits_) throw std::invalid_argument("BitWord: length mismatch in xor");
        for (std::size_t i = 0; i < w_.size(); ++i) w_[i] ^= o.w_[i];
        return *this;
    }
    friend BitWord operator^(BitWord a, const BitWord& b) { a ^= b; return a; }

    std::size_t popcount() const {
        std::size_t c = 0;
        for (uint64_t w : w_) c += std::size_t(std::popcount(w));
        return c;
    }

    bool any() const {
        for (uint64_t w : w_) if (w) return true;
        return false;
    }

    void clear() { for (uint64_t& w : w_) w = 0; }

    // Parity of <this, other> over GF(2).
    bool dot(const BitWord& o) const {
        if (o.nbits_ != nbits_) throw std::invalid_argument("BitWord: length mismatch in dot");
        uint64_t acc = 0;
        for (std::size_t i = 0; i < w_.size(); ++i) acc ^= w_[i] & o.w_[i];
        return std::popcount(acc) & 1u;
    }

    friend bool operator==(const BitWord& a, const BitWord& b) {
        return a.nbits_ == b.nbits_ && a.w_ == b.w_;
    }
    friend bool operator!=(const BitWord& a, const BitWord& b) { return !(a == b); }

    std::vector<uint8_t> to_bits() const {
        std::vector<uint8_t> v(nbits_);
        for (std::size_t i = 0; i < nbits_; ++i) v[i] = get(i) ? 1 : 0;
        return v;
    }

    std::string to_string() const {
        std::string s(nbits_, '0');
        for (std::size_t i = 0; i < nbits_; ++i) if (get(i)) s[i] = '1';
        return s;
    }

private:
    std::size_t nbits_ = 0;
    std::vector<uint64_t> w_;
};

// Calls f(index) for every set bit, in increasing index order.
template <class F>
inline void for_each_set_bit(const BitWord& b, F&& f) {
    for (std::size_t wi = 0; wi < b.words(); ++wi) {
        uint64_t w = b.word(wi);
        while (w) {
            int t = std::countr_zero(w);
            f(wi * 64 + std::size_t(t));
            w &= w - 1;
        }
    }
}

} // namespace grandsim
