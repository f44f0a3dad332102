#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bitword.hpp"
#include "gf2.hpp"
#include "rng.hpp"

namespace grandsim {

enum class CodeKind { random_linear, crc, bch_cyclic, ca_polar, from_file, rate1 };

inline const char* to_string(CodeKind k) {
    switch (k) {
        case CodeKind::random_linear: return "random-linear";
        case CodeKind::crc: return "crc";
        case CodeKind::bch_cyclic: return "bch-cyclic";
        case CodeKind::ca_polar: return "ca-polar";
        case CodeKind::from_file: return "from-file";
        case CodeKind::rate1: return "rate1";
    }
    return "?";
}

// Linear block code over GF(2): generator, parity check, and the per-column
// syndromes of H that make incremental membership testing cheap.
class LinearCode {
public:
    LinearCode() = default;

    static LinearCode from_pair(GF2Matrix G, GF2Matrix H, CodeKind kind) {
        LinearCode c;
        c.kind_ = kind;
        c.G_ = std::move(G);
        c.H_ = std::move(H);
        c.finalize();
        return c;
    }

    static LinearCode from_generator(GF2Matrix G, CodeKind kind) {
        std::vector<BitWord> ns = G.nullspace_basis();
        GF2Matrix H(ns.size(), G.cols());
        for (std::size_t i = 0; i < ns.size(); ++i) H.row(i) = ns[i];
        return from_pair(std::move(G), std::move(H), kind);
    }

    static LinearCode from_parity(GF2Matrix H, CodeKind kind) {
        std::vector<BitWord> ns = H.nullspace_basis();
        GF2Matrix G(ns.size(), H.cols());
        for (std::size_t i = 0; i < ns.size(); ++i) G.row(i) = ns[i];
        return from_pair(std::move(G), std::move(H), kind);
    }

    // Trivial k = n code: every word is a member.
    static LinearCode rate1(std::size_t n) {
        return from_pair(GF2Matrix::identity(n), GF2Matrix(0, n), CodeKind::rate1);
    }

    std::size_t n() const { return n_; }
    std::size_t k() const { return k_; }
    std::size_t redundancy() const { return n_ - k_; }
    CodeKind kind() const { return kind_; }
    const GF2Matrix& generator() const { return G_; }
    const GF2Matrix& parity_check() const { return H_; }

    BitWord encode(const BitWord& info) const {
        if (info.size() != k_) throw std::invalid_argument("LinearCode: encode info length != k");
        return G_.mul_left(info);
    }

    // H * word over GF(2), accumulated from the set bits' column syndromes.
    BitWord syndrome(const BitWord& word) const {
        if (word.size() != n_) throw std::invalid_argument("LinearCode: syndrome word length != n");
        BitWord s(redundancy());
        for_each_set_bit(word, [&](std::size_t j) { s ^= col_synd_[j]; });
        return s;
    }

    bool is_member(const BitWord& word) const {
        return !syndrome(word).any();
    }

    // Column j of H as an (n-k)-bit word.
    const BitWord& col_syndrome(std::size_t j) const { return col_synd_[j]; }

private:
    void finalize() {
        n_ = G_.cols();
        k_ = G_.rows();
        if (H_.cols() != n_) throw std::invalid_argument("LinearCode: G/H column mismatch");
        if (H_.rows() != n_ - k_) throw std::invalid_argument("LinearCode: H must have n-k rows");
        if (n_ == 0 || k_ == 0 || k_ > n_) throw std::invalid_argument("LinearCode: bad dimensions");
        if (G_.rank() != k_) throw std::invalid_argument("LinearCode: generator rank deficient");
        if (H_.rank() != n_ - k_) throw std::invalid_argument("LinearCode: parity check rank deficient");
        for (std::size_t i = 0; i < k_; ++i)
            for (std::size_t j = 0; j < n_ - k_; ++j)
                if (G_.row(i).dot(H_.row(j)))
                    throw std::invalid_argument("LinearCode: G * H^T != 0");
        col_synd_.assign(n_, BitWord(n_ - k_));
        for (std::size_t j = 0; j < n_; ++j)
            for (std::size_t i = 0; i < n_ - k_; ++i)
                if (H_.get(i, j)) col_synd_[j].set(i, true);
    }

    std::size_t n_ = 0, k_ = 0;
    CodeKind kind_ = CodeKind::random_linear;
    GF2Matrix G_, H_;
    std::vector<BitWord> col_synd_;
};

// Systematic [I_k | P] code with P drawn from a seeded deterministic stream.
inline LinearCode random_linear_code(std::size_t n, std::size_t k, uint64_t seed) {
    if (k == 0 || k >= n) throw std::invalid_argument("random_linear_code: need 0 < k < n");
    Xoshiro256 rng(splitmix64_next(seed));
    GF2Matrix G(k, n);
    for (std::size_t i = 0; i < k; ++i) {
        G.set(i, i, true);
        for (std::size_t j = k; j < n; ++j)
            if (rng() >> 63) G.set(i, j, true);
    }
    return LinearCode::from_generator(std::move(G), CodeKind::random_linear);
}

} // namespace grandsim
