#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "modem.hpp"
#include "rng.hpp"

namespace grandsim {

enum class FadingKind { awgn, rayleigh, rician };

struct FadingModel {
    FadingKind kind = FadingKind::rayleigh;
    double k_factor = 0.0;  // rician only

    void validate() const {
        if (k_factor < 0.0) throw std::invalid_argument("FadingModel: k_factor must be >= 0");
    }
};

struct ChannelRealization {
    std::vector<Cplx> h;
    std::vector<double> sigma2;
};

// SNR = 1/sigma^2 per symbol (unit-energy constellation, unit-mean-power fading).
struct SnrPoint {
    double snr_db = 0.0;
    double sigma2 = 1.0;

    static SnrPoint from_db(double db) {
        return SnrPoint{db, std::pow(10.0, -db / 10.0)};
    }
};

// One fresh coefficient per channel use; Rayleigh is unit-mean-power complex
// Gaussian, Rician adds the fixed line-of-sight part:
// h = sqrt(k/(1+k)) + sqrt(1/(1+k)) * h_rayleigh.
inline ChannelRealization draw_channel(const FadingModel& model, std::size_t m,
                                       const SnrPoint& snr, Xoshiro256& rng) {
    if (m < 1) throw std::invalid_argument("draw_channel: need at least one symbol");
    model.validate();
    ChannelRealization ch;
    ch.h.resize(m);
    ch.sigma2.assign(m, snr.sigma2);
    switch (model.kind) {
        case FadingKind::awgn:
            for (std::size_t i = 0; i < m; ++i) ch.h[i] = Cplx(1.0, 0.0);
            break;
        case FadingKind::rayleigh:
            for (std::size_t i = 0; i < m; ++i) {
                auto [re, im] = rng.gaussian_pair();
                ch.h[i] = Cplx(re, im) * std::sqrt(0.5);
            }
            break;
        case FadingKind::rician: {
            double k = model.k_factor;
            double los = std::sqrt(k / (1.0 + k));
            double scatter = std::sqrt(1.0 / (1.0 + k));
            for (std::size_t i = 0; i < m; ++i) {
                auto [re, im] = rng.gaussian_pair();
                ch.h[i] = Cplx(los, 0.0) + scatter * std::sqrt(0.5) * Cplx(re, im);
            }
            break;
        }
    }
    return ch;
}

// y_i = h_i x_i + n_i, n_i circularly symmetric complex Gaussian, E|n_i|^2 = sigma2_i.
inline std::vector<Cplx> apply_channel(const std::vector<Cplx>& x, const ChannelRealization& ch,
                                       Xoshiro256& rng) {
    if (x.size() != ch.h.size() || x.size() != ch.sigma2.size())
        throw std::invalid_argument("apply_channel: length mismatch");
    std::vector<Cplx> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        auto [re, im] = rng.gaussian_pair();
        double s = std::sqrt(ch.sigma2[i] * 0.5);
        y[i] = ch.h[i] * x[i] + Cplx(re * s, im * s);
    }
    return y;
}

} // namespace grandsim
