#pragma once

#include <cstdint>
#include <cstddef>
#include <vector>
#include <stdexcept>
#include <algorithm>

namespace grandsim {

// Polynomial over GF(2); coefficient of x^i is bit (i%64) of c[i/64].
struct Poly2 {
    std::vector<uint64_t> c;

    static Poly2 zero() { return Poly2{}; }
    static Poly2 one() { return from_mask(1); }

    static Poly2 from_mask(uint64_t m) {
        Poly2 p;
        if (m) p.c.push_back(m);
        return p;
    }

    static Poly2 x_pow(std::size_t k) {
        Poly2 p;
        p.c.assign(k / 64 + 1, 0);
        p.c[k / 64] = uint64_t(1) << (k % 64);
        return p;
    }

    bool coeff(std::size_t i) const {
        std::size_t w = i / 64;
        return w < c.size() && ((c[w] >> (i % 64)) & 1u);
    }

    void set_coeff(std::size_t i, bool v) {
        std::size_t w = i / 64;
        if (w >= c.size()) {
            if (!v) return;
            c.resize(w + 1, 0);
        }
        uint64_t m = uint64_t(1) << (i % 64);
        if (v) c[w] |= m; else c[w] &= ~m;
        if (!v) trim();
    }

    void trim() {
        while (!c.empty() && c.back() == 0) c.pop_back();
    }

    bool is_zero() const { return c.empty(); }

    // Degree; -1 for the zero polynomial.
    int degree() const {
        if (c.empty()) return -1;
        uint64_t top = c.back();
        int b = 63;
        while (!((top >> b) & 1u)) --b;
        return int((c.size() - 1) * 64) + b;
    }

    uint64_t to_mask() const {
        if (degree() >= 64) throw std::invalid_argument("Poly2: degree too large for mask");
        return c.empty() ? 0 : c[0];
    }

    friend bool operator==(const Poly2& a, const Poly2& b) { return a.c == b.c; }
    friend bool operator!=(const Poly2& a, const Poly2& b) { return !(a == b); }

    friend Poly2 operator^(Poly2 a, const Poly2& b) {
        if (a.c.size() < b.c.size()) a.c.resize(b.c.size(), 0);
        for (std::size_t i = 0; i < b.c.size(); ++i) a.c[i] ^= b.c[i];
        a.trim();
        return a;
    }

    friend Poly2 operator*(const Poly2& a, const Poly2& b) {
        if (a.is_zero() || b.is_zero()) return zero();
        Poly2 r;
        r.c.assign(a.c.size() + b.c.size(), 0);
        int db = b.degree();
        for (int i = 0; i <= db; ++i) {
            if (!b.coeff(std::size_t(i))) continue;
            std::size_t ws = std::size_t(i) / 64, bs = std::size_t(i) % 64;
            for (std::size_t w = 0; w < a.c.size(); ++w) {
                r.c[w + ws] ^= a.c[w] << bs;
                if (bs && w + ws + 1 < r.c.size())
                    r.c[w + ws + 1] ^= a.c[w] >> (64 - bs);
            }
        }
        r.trim();
        return r;
    }

    // Remainder of a / b; b must be nonzero.
    friend Poly2 operator%(Poly2 a, const Poly2& b) {
        int db = b.degree();
        if (db < 0) throw std::invalid_argument("Poly2: mod by zero");
        int da = a.degree();
        while (da >= db) {
            int sh = da - db;
            std::size_t ws = std::size_t(sh) / 64, bs = std::size_t(sh) % 64;
            if (a.c.size() < b.c.size() + ws + 1) a.c.resize(b.c.size() + ws + 1, 0);
            for (std::size_t w = 0; w < b.c.size(); ++w) {
                a.c[w + ws] ^= b.c[w] << bs;
                if (bs && w + ws + 1 < a.c.size())
                    a.c[w + ws + 1] ^= b.c[w] >> (64 - bs);
            }
            a.trim();
            da = a.degree();
        }
        return a;
    }

    friend Poly2 gcd(Poly2 a, Poly2 b) {
        while (!b.is_zero()) {
            Poly2 r = a % b;
            a = std::move(b);
            b = std::move(r);
        }
        return a;
    }

    friend Poly2 lcm(const Poly2& a, const Poly2& b) {
        if (a.is_zero() || b.is_zero()) return zero();
        Poly2 g = gcd(a, b);
        Poly2 q = a;  // a / g via repeated subtraction of shifted g
        // divide exactly: long division quotient
        Poly2 quot;
        int dg = g.degree();
        while (q.degree() >= dg) {
            int sh = q.degree() - dg;
            quot.set_coeff(std::size_t(sh), true);
            q = q ^ (g * Poly2::x_pow(std::size_t(sh)));
        }
        return quot * b;
    }

    bool divides(const Poly2& other) const {
        return (other % *this).is_zero();
    }
};

// GF(2^m) with log/antilog tables over a primitive polynomial.
class GF2mField {
public:
    explicit GF2mField(int m) : m_(m) {
        if (m < 3 || m > 16) throw std::invalid_argument("GF2mField: m out of range [3,16]");
        prim_ = primitive_poly(m);
        n_ = (uint32_t(1) << m) - 1;
        alog_.resize(std::size_t(n_) * 2);
        log_.assign(std::size_t(n_) + 1, 0);
        uint32_t v = 1;
        for (uint32_t i = 0; i < n_; ++i) {
            alog_[i] = v;
            log_[v] = i;
            v <<= 1;
            if (v >> m) v ^= prim_;
        }
        for (uint32_t i = n_; i < 2 * n_; ++i) alog_[i] = alog_[i - n_];
    }

    // Primitive polynomial mask (x^m term included), standard table.
    static uint32_t primitive_poly(int m) {
        switch (m) {
            case 3:  return 0xB;
            case 4:  return 0x13;
            case 5:  return 0x25;
            case 6:  return 0x43;
            case 7:  return 0x89;
            case 8:  return 0x11D;
            case 9:  return 0x211;
            case 10: return 0x409;
            case 11: return 0x805;
            case 12: return 0x1053;
            case 13: return 0x201B;
            case 14: return 0x4443;
            case 15: return 0x8003;
            case 16: return 0x1100B;
            default: throw std::invalid_argument("GF2mField: no primitive polynomial for m");
        }
    }

    int m() const { return m_; }
    uint32_t order() const { return n_; }  // multiplicative order 2^m - 1

    uint32_t mul(uint32_t a, uint32_t b) const {
        if (a == 0 || b == 0) return 0;
        return alog_[log_[a] + log_[b]];
    }

    uint32_t alpha_pow(uint32_t e) const { return alog_[e % n_]; }

    // Minimal polynomial of alpha^e over GF(2): product of (x - alpha^s) over the
    // cyclotomic coset of e mod 2^m-1.
    Poly2 minimal_poly(uint32_t e) const {
        e %= n_;
        if (e == 0) return Poly2::from_mask(0b11);  // x + 1
        std::vector<uint32_t> coset;
        uint32_t s = e;
        do {
            coset.push_back(s);
            s = uint32_t((uint64_t(s) * 2) % n_);
        } while (s != e);
        // coefficients live in GF(2^m) during the product, then must collapse to {0,1}
        std::vector<uint32_t> p{1};
        for (uint32_t ex : coset) {
            uint32_t root = alpha_pow(ex);
            std::vector<uint32_t> q(p.size() + 1, 0);
            for (std::size_t i = 0; i < p.size(); ++i) {
                q[i + 1] ^= p[i];
                q[i] ^= mul(p[i], root);
            }
            p = std::move(q);
        }
        Poly2 r;
        for (std::size_t i = 0; i < p.size(); ++i) {
            if (p[i] > 1) throw std::logic_error("GF2mField: minimal polynomial not binary");
            if (p[i]) r.set_coeff(i, true);
        }
        return r;
    }

private:
    int m_;
    uint32_t prim_ = 0, n_ = 0;
    std::vector<uint32_t> alog_;
    std::vector<uint32_t> log_;
};

} // namespace grandsim
