#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "bitword.hpp"
#include "channel.hpp"
#include "modem.hpp"

namespace grandsim {

enum class Detector { zf, mmse, ml };
enum class Softness { hard, psoft, soft };

inline const char* to_string(Detector d) {
    switch (d) {
        case Detector::zf: return "zf";
        case Detector::mmse: return "mmse";
        case Detector::ml: return "ml";
    }
    return "?";
}

inline const char* to_string(Softness s) {
    switch (s) {
        case Softness::hard: return "hard";
        case Softness::psoft: return "psoft";
        case Softness::soft: return "soft";
    }
    return "?";
}

// Fades below this magnitude are clamped instead of erroring: a Monte-Carlo
// sweep must survive arbitrarily deep Rayleigh fades, and a clamped symbol
// ends up with near-zero reliability, which is the right message downstream.
inline constexpr double kDeepFadeClamp = 1e-30;

struct EqualizedFrame {
    std::vector<Cplx> y_eq;
    std::vector<double> post_var;  // post-equalization noise variance per symbol
    Detector detector = Detector::zf;
    long deep_fades = 0;
};

// y_eq = y / h, post_var = sigma2 / |h|^2.
inline EqualizedFrame zf_equalize(const std::vector<Cplx>& y, const ChannelRealization& ch) {
    if (y.size() != ch.h.size()) throw std::invalid_argument("zf_equalize: length mismatch");
    EqualizedFrame out;
    out.detector = Detector::zf;
    out.y_eq.resize(y.size());
    out.post_var.resize(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        Cplx h = ch.h[i];
        double mag = std::abs(h);
        if (mag < kDeepFadeClamp) {
            h = (mag == 0.0) ? Cplx(kDeepFadeClamp, 0.0) : h * (kDeepFadeClamp / mag);
            ++out.deep_fades;
        }
        out.y_eq[i] = y[i] / h;
        out.post_var[i] = ch.sigma2[i] / std::norm(h);
    }
    return out;
}

// y_eq = h* y / (|h|^2 + sigma2), post_var = sigma2 / (|h|^2 + sigma2).
inline EqualizedFrame mmse_equalize(const std::vector<Cplx>& y, const ChannelRealization& ch) {
    if (y.size() != ch.h.size()) throw std::invalid_argument("mmse_equalize: length mismatch");
    EqualizedFrame out;
    out.detector = Detector::mmse;
    out.y_eq.resize(y.size());
    out.post_var.resize(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        double denom = std::norm(ch.h[i]) + ch.sigma2[i];
        out.y_eq[i] = std::conj(ch.h[i]) * y[i] / denom;
        out.post_var[i] = ch.sigma2[i] / denom;
    }
    return out;
}

// No equalization: the raw samples with the original noise variances.
inline EqualizedFrame ml_passthrough(const std::vector<Cplx>& y, const ChannelRealization& ch) {
    if (y.size() != ch.h.size()) throw std::invalid_argument("ml_passthrough: length mismatch");
    EqualizedFrame out;
    out.detector = Detector::ml;
    out.y_eq = y;
    out.post_var = ch.sigma2;
    return out;
}

// Per-bit reliability magnitudes 1/post_var, repeated q times per symbol
// (the stair-step: channel state supplies no intra-symbol ordering).
inline std::vector<double> pseudo_soft(const EqualizedFrame& frame, int q) {
    if (q < 1) throw std::invalid_argument("pseudo_soft: q must be >= 1");
    std::vector<double> out;
    out.reserve(frame.post_var.size() * std::size_t(q));
    for (double v : frame.post_var) {
        double rel = 1.0 / v;
        for (int j = 0; j < q; ++j) out.push_back(rel);
    }
    return out;
}

struct DetectResult {
    BitWord word;
    EqualizedFrame eq;
};

// Hard detection: ml slices against h-scaled points; zf/mmse slice the
// equalized sample.
inline DetectResult detect_hard(const std::vector<Cplx>& y, const ChannelRealization& ch,
                                Detector detector, const Constellation& cons) {
    DetectResult out;
    int q = cons.q();
    switch (detector) {
        case Detector::ml: {
            out.eq = ml_passthrough(y, ch);
            out.word = BitWord(y.size() * std::size_t(q));
            for (std::size_t i = 0; i < y.size(); ++i) {
                std::size_t best = 0;
                double best_d = HUGE_VAL;
                for (std::size_t label = 0; label < cons.size(); ++label) {
                    double d = std::norm(y[i] - ch.h[i] * cons.point(label));
                    if (d < best_d) {
                        best_d = d;
                        best = label;
                    }
                }
                for (int j = 0; j < q; ++j)
                    out.word.set(i * std::size_t(q) + std::size_t(j), (best >> (q - 1 - j)) & 1u);
            }
            return out;
        }
        case Detector::zf:
            out.eq = zf_equalize(y, ch);
            break;
        case Detector::mmse:
            out.eq = mmse_equalize(y, ch);
            break;
    }
    out.word = demap_hard(out.eq.y_eq, cons);
    return out;
}

// Max-log LLRs on the equalized samples using the post-equalization variances.
inline std::vector<double> soft_llrs(const EqualizedFrame& frame, const Constellation& cons) {
    if (frame.detector == Detector::ml)
        throw std::invalid_argument("soft_llrs: requires a zf or mmse equalized frame");
    int q = cons.q();
    std::vector<double> out(frame.y_eq.size() * std::size_t(q));
    for (std::size_t i = 0; i < frame.y_eq.size(); ++i)
        llr_maxlog_symbol(frame.y_eq[i], Cplx(1.0, 0.0), frame.post_var[i], cons,
                          out.data() + i * std::size_t(q));
    return out;
}

} // namespace grandsim
