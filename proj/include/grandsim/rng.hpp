#pragma once

#include <cstdint>
#include <cmath>
#include <utility>

namespace grandsim {

inline uint64_t splitmix64_next(uint64_t& state) {
    uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// xoshiro256** seeded via splitmix64.  Each simulated frame gets its own engine
// derived from (master_seed, snr_index, frame_index), so results do not depend
// on how frames are distributed across workers.
class Xoshiro256 {
public:
    explicit Xoshiro256(uint64_t seed) {
        uint64_t sm = seed;
        for (auto& si : s_) si = splitmix64_next(sm);
    }

    static Xoshiro256 for_frame(uint64_t master_seed, uint64_t snr_index, uint64_t frame_index) {
        // mix the three coordinates through splitmix64 so nearby indices decorrelate
        uint64_t sm = master_seed;
        uint64_t a = splitmix64_next(sm);
        sm ^= 0x6A09E667F3BCC909ull + snr_index;
        uint64_t b = splitmix64_next(sm);
        sm ^= 0xBB67AE8584CAA73Bull + frame_index;
        uint64_t c = splitmix64_next(sm);
        return Xoshiro256(a ^ (b * 0x2545F4914F6CDD1Dull) ^ (c * 0x9E3779B97F4A7C15ull));
    }

    using result_type = uint64_t;
    static constexpr uint64_t min() { return 0; }
    static constexpr uint64_t max() { return ~uint64_t(0); }

    uint64_t operator()() {
        uint64_t result = rotl(s_[1] * 5, 7) * 9;
        uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform on (0,1]; never returns 0 so log() is safe.
    double uniform_pos() {
        // 53 random mantissa bits
        uint64_t u = operator()() >> 11;
        return (double(u) + 1.0) * (1.0 / 9007199254740992.0);
    }

    // Uniform on [0,1).
    double uniform() {
        return double(operator()() >> 11) * (1.0 / 9007199254740992.0);
    }

    bool bernoulli(double p) { return uniform() < p; }

    // Standard normal pair via Box-Muller.
    std::pair<double, double> gaussian_pair() {
        double u1 = uniform_pos();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double th = 6.283185307179586476925286766559 * u2;
        return {r * std::cos(th), r * std::sin(th)};
    }

    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        auto [a, b] = gaussian_pair();
        spare_ = b;
        have_spare_ = true;
        return a;
    }

private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    uint64_t s_[4];
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace grandsim
