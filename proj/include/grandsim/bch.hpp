#pragma once

#include <cstddef>
#include <stdexcept>

#include "bitword.hpp"
#include "gf2.hpp"
#include "gf2poly.hpp"
#include "linear_code.hpp"

namespace grandsim {

// Cyclic code as a length plus generator polynomial of degree n-k.
struct CyclicCodeSpec {
    std::size_t n = 0;
    Poly2 generator_poly;

    std::size_t k() const { return n - std::size_t(generator_poly.degree()); }
};

// Bit layout of cyclic code-words: positions [0,k) are information bits, bit i
// holding the coefficient of x^{n-k+i}; positions [k,n) are parity bits, bit
// k+j holding the coefficient of x^j.  So c(x) = m(x)·x^{n-k} + r(x) with
// r = m·x^{n-k} mod g, and membership <=> g divides c.
inline Poly2 cyclic_word_to_poly(const CyclicCodeSpec& spec, const BitWord& word) {
    if (word.size() != spec.n) throw std::invalid_argument("cyclic_word_to_poly: length mismatch");
    std::size_t k = spec.k();
    Poly2 p;
    for (std::size_t i = 0; i < k; ++i)
        if (word.get(i)) p.set_coeff(spec.n - k + i, true);
    for (std::size_t j = 0; j + k < spec.n; ++j)
        if (word.get(k + j)) p.set_coeff(j, true);
    return p;
}

inline bool cyclic_member(const CyclicCodeSpec& spec, const BitWord& word) {
    return (cyclic_word_to_poly(spec, word) % spec.generator_poly).is_zero();
}

struct BchCode {
    CyclicCodeSpec spec;
    LinearCode code;
};

// Narrow-sense binary BCH over GF(2^m): generator polynomial is the lcm of the
// minimal polynomials of alpha^1..alpha^{2t}.
inline BchCode build_bch(int m, int t) {
    if (m < 3 || m > 16) throw std::invalid_argument("build_bch: m out of range [3,16]");
    if (t < 1) throw std::invalid_argument("build_bch: t must be >= 1");
    GF2mField field(m);
    std::size_t n = field.order();
    Poly2 g = Poly2::one();
    for (int e = 1; e <= 2 * t; ++e)
        g = lcm(g, field.minimal_poly(uint32_t(e)));
    int r = g.degree();
    if (r <= 0 || std::size_t(r) >= n)
        throw std::runtime_error("build_bch: t too large for m (no information bits left)");
    std::size_t k = n - std::size_t(r);

    // sanity: g must divide x^n - 1
    Poly2 xn1 = Poly2::x_pow(n) ^ Poly2::one();
    if (!g.divides(xn1))
        throw std::runtime_error("build_bch: generator does not divide x^n - 1");

    // systematic G = [I_k | P], row i parity = x^{n-k+i} mod g
    GF2Matrix G(k, n);
    GF2Matrix H(n - k, n);
    for (std::size_t i = 0; i < k; ++i) {
        G.set(i, i, true);
        Poly2 rem = Poly2::x_pow(n - k + i) % g;
        for (std::size_t j = 0; j < n - k; ++j)
            if (rem.coeff(j)) {
                G.set(i, k + j, true);
                H.set(j, i, true);
            }
    }
    for (std::size_t j = 0; j < n - k; ++j) H.set(j, k + j, true);

    BchCode out;
    out.spec = CyclicCodeSpec{n, g};
    out.code = LinearCode::from_pair(std::move(G), std::move(H), CodeKind::bch_cyclic);
    return out;
}

} // namespace grandsim
