#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "bitword.hpp"
#include "crc.hpp"
#include "gf2.hpp"
#include "linear_code.hpp"

namespace grandsim {

struct PolarSpec {
    std::size_t block_length = 0;          // N, power of two
    std::size_t k = 0;                     // payload bits (CRC excluded)
    CrcSpec crc;
    std::vector<std::size_t> info_set;     // sorted ascending, size k + crc.width
};

// In-place butterfly x = u F^{(x) log2 N}, F = [[1,0],[1,1]]; self-inverse.
inline void polar_transform(BitWord& u) {
    std::size_t n = u.size();
    if (n == 0 || (n & (n - 1)) != 0) throw std::invalid_argument("polar_transform: length not a power of two");
    for (std::size_t len = 1; len < n; len <<= 1)
        for (std::size_t i = 0; i < n; i += 2 * len)
            for (std::size_t j = 0; j < len; ++j)
                if (u.get(i + j + len)) u.flip(i + j);
}

// Universal beta-expansion channel-reliability order, beta = 2^(1/4).
// Returned indices are sorted by increasing reliability: most reliable last.
inline std::vector<std::size_t> pw_reliability_order(std::size_t n) {
    if (n == 0 || (n & (n - 1)) != 0) throw std::invalid_argument("pw_reliability_order: n not a power of two");
    const double beta = std::pow(2.0, 0.25);
    std::vector<double> w(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; (std::size_t(1) << j) <= i; ++j)
            if ((i >> j) & 1) acc += std::pow(beta, double(j));
        w[i] = acc;
    }
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        if (w[a] != w[b]) return w[a] < w[b];
        return a < b;
    });
    return idx;
}

// Whitespace-separated 0-based indices, most reliable last.
inline std::vector<std::size_t> parse_reliability_order(const std::string& text, std::size_t n) {
    std::istringstream is(text);
    std::vector<std::size_t> order;
    long long v;
    while (is >> v) {
        if (v < 0 || std::size_t(v) >= n)
            throw std::invalid_argument("reliability order: index out of range");
        order.push_back(std::size_t(v));
    }
    if (order.size() != n) throw std::invalid_argument("reliability order: wrong count");
    std::vector<bool> seen(n, false);
    for (std::size_t i : order) {
        if (seen[i]) throw std::invalid_argument("reliability order: duplicate index");
        seen[i] = true;
    }
    return order;
}

// u-domain layout: payload||crc placed at info_set positions in ascending
// index order, zeros elsewhere; code-word is the transform of u.
inline BitWord ca_polar_expand(const PolarSpec& spec, const BitWord& payload) {
    if (payload.size() != spec.k) throw std::invalid_argument("ca_polar_expand: payload length != k");
    BitWord with_crc = spec.crc.empty() ? payload : crc_append(spec.crc, payload);
    BitWord u(spec.block_length);
    for (std::size_t i = 0; i < spec.info_set.size(); ++i)
        if (with_crc.get(i)) u.set(spec.info_set[i], true);
    polar_transform(u);
    return u;
}

// Structural membership: invert the transform, require zero frozen positions
// and a passing CRC.  Equivalent to the parity-check test; kept as the
// independent cross-check.
inline bool ca_polar_structural_member(const PolarSpec& spec, const BitWord& word) {
    if (word.size() != spec.block_length) throw std::invalid_argument("ca_polar_structural_member: length");
    BitWord u = word;
    polar_transform(u);
    std::vector<bool> info_mask(spec.block_length, false);
    for (std::size_t i : spec.info_set) info_mask[i] = true;
    for (std::size_t i = 0; i < spec.block_length; ++i)
        if (!info_mask[i] && u.get(i)) return false;
    if (spec.crc.empty()) return true;
    BitWord v(spec.info_set.size());
    for (std::size_t i = 0; i < spec.info_set.size(); ++i)
        v.set(i, u.get(spec.info_set[i]));
    return crc_check(spec.crc, v);
}

struct CaPolarCode {
    PolarSpec spec;
    LinearCode code;
};

inline CaPolarCode build_ca_polar(std::size_t block_length, std::size_t k, const CrcSpec& crc,
                                  const std::vector<std::size_t>& reliability_order) {
    if (block_length == 0 || (block_length & (block_length - 1)) != 0)
        throw std::invalid_argument("build_ca_polar: block_length not a power of two");
    crc.validate();
    std::size_t info_bits = k + std::size_t(crc.width);
    if (k == 0 || info_bits > block_length)
        throw std::invalid_argument("build_ca_polar: k + crc width exceeds block length");
    if (reliability_order.size() != block_length)
        throw std::invalid_argument("build_ca_polar: reliability order size mismatch");
    {
        std::vector<bool> seen(block_length, false);
        for (std::size_t i : reliability_order) {
            if (i >= block_length || seen[i])
                throw std::invalid_argument("build_ca_polar: reliability order is not a permutation");
            seen[i] = true;
        }
    }

    PolarSpec spec;
    spec.block_length = block_length;
    spec.k = k;
    spec.crc = crc;
    spec.info_set.assign(reliability_order.end() - long(info_bits), reliability_order.end());
    std::sort(spec.info_set.begin(), spec.info_set.end());

    GF2Matrix G(k, block_length);
    for (std::size_t i = 0; i < k; ++i) {
        BitWord e(k);
        e.set(i, true);
        G.row(i) = ca_polar_expand(spec, e);
    }

    CaPolarCode out;
    out.spec = std::move(spec);
    out.code = LinearCode::from_generator(std::move(G), CodeKind::ca_polar);
    return out;
}

} // namespace grandsim
