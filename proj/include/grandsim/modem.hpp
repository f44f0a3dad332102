#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bitword.hpp"

namespace grandsim {

using Cplx = std::complex<double>;

// LLRs are clamped to this magnitude (natural-log units) so that downstream
// exponentials stay finite.
inline constexpr double kLlrClamp = 60.0;

// Gray-labeled square constellations with unit average energy.  A symbol's
// q-bit label, read MSB first, is the index into points.  For q >= 2 the
// first q/2 bits select the I amplitude and the last q/2 the Q amplitude;
// each axis uses binary-reflected Gray labeling with bit pattern all-zero at
// the most positive amplitude (bit b contributes sign 1-2b).
class Constellation {
public:
    const std::string& name() const { return name_; }
    int q() const { return q_; }
    std::size_t size() const { return points_.size(); }
    Cplx point(std::size_t label) const { return points_[label]; }
    const std::vector<Cplx>& points() const { return points_; }

    static const Constellation& bpsk() { static Constellation c = make(1, "bpsk"); return c; }
    static const Constellation& qpsk() { static Constellation c = make(2, "qpsk"); return c; }
    static const Constellation& qam16() { static Constellation c = make(4, "qam16"); return c; }
    static const Constellation& qam64() { static Constellation c = make(6, "qam64"); return c; }

    static const Constellation& by_name(std::string_view n) {
        if (n == "bpsk") return bpsk();
        if (n == "qpsk") return qpsk();
        if (n == "qam16") return qam16();
        if (n == "qam64") return qam64();
        throw std::invalid_argument("Constellation: unknown name '" + std::string(n) + "'");
    }

private:
    static uint32_t gray_to_binary(uint32_t g) {
        for (uint32_t m = g >> 1; m; m >>= 1) g ^= m;
        return g;
    }

    // Amplitude for t Gray bits: +(2^t - 1) at label 0, descending by 2 along
    // the Gray sequence, so nearest amplitudes differ in exactly one bit.
    static double axis_amplitude(uint32_t bits, int t) {
        double top = double((1u << t) - 1);
        return top - 2.0 * double(gray_to_binary(bits));
    }

    static Constellation make(int q, const char* name) {
        Constellation c;
        c.q_ = q;
        c.name_ = name;
        std::size_t m = std::size_t(1) << q;
        c.points_.resize(m);
        if (q == 1) {
            c.points_[0] = Cplx(1.0, 0.0);
            c.points_[1] = Cplx(-1.0, 0.0);
        } else {
            int t = q / 2;
            for (std::size_t label = 0; label < m; ++label) {
                uint32_t ibits = uint32_t(label >> t);
                uint32_t qbits = uint32_t(label) & ((1u << t) - 1);
                c.points_[label] = Cplx(axis_amplitude(ibits, t), axis_amplitude(qbits, t));
            }
        }
        double energy = 0.0;
        for (const Cplx& p : c.points_) energy += std::norm(p);
        double scale = 1.0 / std::sqrt(energy / double(m));
        for (Cplx& p : c.points_) p *= scale;
        return c;
    }

    std::string name_;
    int q_ = 0;
    std::vector<Cplx> points_;
};

// Bits -> symbols; bit i*q+j is bit j (MSB first) of symbol i's label.
inline std::vector<Cplx> map_bits(const BitWord& word, const Constellation& cons) {
    int q = cons.q();
    if (word.size() % std::size_t(q) != 0)
        throw std::invalid_argument("map_bits: word length not divisible by bits per symbol");
    std::size_t m = word.size() / std::size_t(q);
    std::vector<Cplx> out(m);
    for (std::size_t i = 0; i < m; ++i) {
        std::size_t label = 0;
        for (int j = 0; j < q; ++j)
            label = (label << 1) | std::size_t(word.get(i * std::size_t(q) + std::size_t(j)));
        out[i] = cons.point(label);
    }
    return out;
}

// Nearest constellation point; ties broken toward the lowest label.
inline std::size_t slice(Cplx y_eq, const Constellation& cons) {
    std::size_t best = 0;
    double best_d = std::norm(y_eq - cons.point(0));
    for (std::size_t i = 1; i < cons.size(); ++i) {
        double d = std::norm(y_eq - cons.point(i));
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

// Slice every symbol and emit the labels MSB first.
inline BitWord demap_hard(const std::vector<Cplx>& symbols, const Constellation& cons) {
    int q = cons.q();
    BitWord out(symbols.size() * std::size_t(q));
    for (std::size_t i = 0; i < symbols.size(); ++i) {
        std::size_t label = slice(symbols[i], cons);
        for (int j = 0; j < q; ++j)
            out.set(i * std::size_t(q) + std::size_t(j), (label >> (q - 1 - j)) & 1u);
    }
    return out;
}

inline double clamp_llr(double v) {
    return std::clamp(v, -kLlrClamp, kLlrClamp);
}

// Max-log per-symbol LLRs; positive value means bit 1 is more likely:
// lambda_j = (1/sigma2) * (min_{bit_j=0} |y - h x|^2 - min_{bit_j=1} |y - h x|^2).
inline void llr_maxlog_symbol(Cplx y, Cplx h, double sigma2, const Constellation& cons,
                              double* out) {
    if (!(sigma2 > 0.0)) throw std::invalid_argument("llr_maxlog_symbol: sigma2 must be > 0");
    int q = cons.q();
    for (int j = 0; j < q; ++j) {
        double best0 = HUGE_VAL, best1 = HUGE_VAL;
        for (std::size_t label = 0; label < cons.size(); ++label) {
            double d = std::norm(y - h * cons.point(label));
            if ((label >> (q - 1 - j)) & 1u) {
                if (d < best1) best1 = d;
            } else {
                if (d < best0) best0 = d;
            }
        }
        out[j] = clamp_llr((best0 - best1) / sigma2);
    }
}

// Exact per-symbol LLRs via log-sum-exp, same sign convention.
inline void llr_exact_symbol(Cplx y, Cplx h, double sigma2, const Constellation& cons,
                             double* out) {
    if (!(sigma2 > 0.0)) throw std::invalid_argument("llr_exact_symbol: sigma2 must be > 0");
    int q = cons.q();
    std::vector<double> metric(cons.size());
    for (std::size_t label = 0; label < cons.size(); ++label)
        metric[label] = -std::norm(y - h * cons.point(label)) / sigma2;
    auto lse = [&](int j, bool bit) {
        double mx = -HUGE_VAL;
        for (std::size_t label = 0; label < cons.size(); ++label)
            if ((((label >> (q - 1 - j)) & 1u) != 0) == bit) mx = std::max(mx, metric[label]);
        double acc = 0.0;
        for (std::size_t label = 0; label < cons.size(); ++label)
            if ((((label >> (q - 1 - j)) & 1u) != 0) == bit) acc += std::exp(metric[label] - mx);
        return mx + std::log(acc);
    };
    for (int j = 0; j < q; ++j) out[j] = clamp_llr(lse(j, true) - lse(j, false));
}

} // namespace grandsim
