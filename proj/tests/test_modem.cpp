#include <doctest.h>

#include <grandsim/bitword.hpp>
#include <grandsim/modem.hpp>
#include <grandsim/rng.hpp>

#include <cmath>
#include <stdexcept>
#include <vector>

using namespace grandsim;

namespace {

BitWord random_word(std::size_t n, Xoshiro256& rng) {
    BitWord w(n);
    for (std::size_t i = 0; i < n; ++i) w.set(i, rng() & 1);
    return w;
}

const Constellation* all_cons[] = {&Constellation::bpsk(), &Constellation::qpsk(),
                                   &Constellation::qam16(), &Constellation::qam64()};

bool close_rel(double a, double b, double tol = 1e-9) {
    return std::abs(a - b) <= tol * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

} // namespace

TEST_CASE("constellations have unit energy and distinct points") {
    for (const Constellation* c : all_cons) {
        double energy = 0.0;
        for (std::size_t i = 0; i < c->size(); ++i) {
            energy += std::norm(c->point(i));
            for (std::size_t j = i + 1; j < c->size(); ++j)
                CHECK(std::abs(c->point(i) - c->point(j)) > 1e-9);
        }
        CHECK(std::abs(energy / double(c->size()) - 1.0) < 1e-12);
        CHECK(c->size() == (std::size_t(1) << c->q()));
    }
}

TEST_CASE("gray property: minimum-distance neighbors differ in one label bit") {
    for (const Constellation* c : all_cons) {
        double dmin = HUGE_VAL;
        for (std::size_t i = 0; i < c->size(); ++i)
            for (std::size_t j = i + 1; j < c->size(); ++j)
                dmin = std::min(dmin, std::abs(c->point(i) - c->point(j)));
        for (std::size_t i = 0; i < c->size(); ++i)
            for (std::size_t j = i + 1; j < c->size(); ++j) {
                if (std::abs(c->point(i) - c->point(j)) > dmin * 1.0001) continue;
                CHECK(std::popcount(i ^ j) == 1);
            }
    }
}

TEST_CASE("bpsk and qpsk mapping conventions") {
    std::vector<Cplx> s = map_bits(BitWord::from_string("0"), Constellation::bpsk());
    CHECK(s[0] == Cplx(1.0, 0.0));
    s = map_bits(BitWord::from_string("1"), Constellation::bpsk());
    CHECK(s[0] == Cplx(-1.0, 0.0));

    s = map_bits(BitWord::from_string("00"), Constellation::qpsk());
    double r = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(s[0] - Cplx(r, r)) < 1e-12);
}

TEST_CASE("map_bits requires divisibility") {
    CHECK_THROWS_AS((void)map_bits(BitWord(7), Constellation::qpsk()), std::invalid_argument);
    CHECK_THROWS_AS((void)map_bits(BitWord(10), Constellation::qam16()), std::invalid_argument);
}

TEST_CASE("slice basics") {
    const Constellation& b = Constellation::bpsk();
    CHECK(slice(Cplx(0.1, 0.7), b) == 0);   // nearest of +-1 is +1
    CHECK(slice(Cplx(-0.1, 0.0), b) == 1);
    for (const Constellation* c : all_cons)
        for (std::size_t i = 0; i < c->size(); ++i)
            CHECK(slice(c->point(i), *c) == i);

    // far outside the 16-QAM grid corner: still the corner point
    const Constellation& q16 = Constellation::qam16();
    std::size_t corner = slice(Cplx(100.0, 100.0), q16);
    double best = -HUGE_VAL;
    std::size_t want = 0;
    for (std::size_t i = 0; i < q16.size(); ++i) {
        double score = q16.point(i).real() + q16.point(i).imag();
        if (score > best) {
            best = score;
            want = i;
        }
    }
    CHECK(corner == want);
}

TEST_CASE("demap inverts map for every constellation") {
    Xoshiro256 rng(41);
    for (const Constellation* c : all_cons) {
        std::size_t n = std::size_t(c->q()) * 24;
        for (int trial = 0; trial < 20; ++trial) {
            BitWord w = random_word(n, rng);
            CHECK(demap_hard(map_bits(w, *c), *c) == w);
        }
    }
}

TEST_CASE("bpsk max-log llr fixture values") {
    const Constellation& b = Constellation::bpsk();
    double l;
    llr_maxlog_symbol(Cplx(0.0, 0.3), Cplx(1, 0), 1.0, b, &l);
    CHECK(l == doctest::Approx(0.0).epsilon(1e-12));
    // y = 0.5: bit 0 (symbol +1) nearer -> negative llr of magnitude 2
    llr_maxlog_symbol(Cplx(0.5, 0.0), Cplx(1, 0), 1.0, b, &l);
    CHECK(l == doctest::Approx(-2.0));
    llr_maxlog_symbol(Cplx(-0.5, 0.0), Cplx(1, 0), 1.0, b, &l);
    CHECK(l == doctest::Approx(2.0));
}

TEST_CASE("llr rotational and scaling invariance") {
    Xoshiro256 rng(43);
    for (const Constellation* c : all_cons) {
        std::vector<double> a(std::size_t(c->q())), b(std::size_t(c->q()));
        for (int trial = 0; trial < 200; ++trial) {
            Cplx y(rng.gaussian(), rng.gaussian());
            Cplx h(rng.gaussian(), rng.gaussian());
            double s2 = 0.05 + rng.uniform();
            llr_maxlog_symbol(y, h, s2, *c, a.data());

            double th = rng.uniform() * 6.28;
            Cplx rot(std::cos(th), std::sin(th));
            llr_maxlog_symbol(y * rot, h * rot, s2, *c, b.data());
            for (int j = 0; j < c->q(); ++j) CHECK(close_rel(a[j], b[j]));

            double alpha = 0.1 + 3.0 * rng.uniform();
            llr_maxlog_symbol(alpha * y, alpha * h, alpha * alpha * s2, *c, b.data());
            for (int j = 0; j < c->q(); ++j) CHECK(close_rel(a[j], b[j]));
        }
    }
}

TEST_CASE("exact llr equals max-log for bpsk and in the low-noise limit") {
    const Constellation& b = Constellation::bpsk();
    Xoshiro256 rng(47);
    for (int trial = 0; trial < 100; ++trial) {
        Cplx y(rng.gaussian(), rng.gaussian());
        Cplx h(rng.gaussian(), rng.gaussian());
        double s2 = 0.1 + rng.uniform();
        double ml, ex;
        llr_maxlog_symbol(y, h, s2, b, &ml);
        llr_exact_symbol(y, h, s2, b, &ex);
        CHECK(close_rel(ml, ex, 1e-12));
    }

    const Constellation& q16 = Constellation::qam16();
    std::vector<double> ml(4), ex(4);
    for (int trial = 0; trial < 100; ++trial) {
        // keep y near the constellation so metrics stay off the clamp
        Cplx y = q16.point(rng() % 16) + Cplx(rng.gaussian(), rng.gaussian()) * 0.003;
        llr_maxlog_symbol(y, Cplx(1, 0), 1e-4, q16, ml.data());
        llr_exact_symbol(y, Cplx(1, 0), 1e-4, q16, ex.data());
        for (int j = 0; j < 4; ++j) {
            if (std::abs(ml[j]) >= kLlrClamp || std::abs(ex[j]) >= kLlrClamp) continue;
            CHECK(std::abs(ml[j] - ex[j]) < 1e-6);
        }
    }
}

TEST_CASE("exact and max-log llr signs agree") {
    // Near a decision boundary at strong noise the secondary exponential terms
    // can flip the exact llr's sign while max-log sits at ~0, so the sign
    // property is checked where it genuinely holds: channel-like samples at
    // high SNR (tiny exclusion band), plus moderate SNR outside |llr| < 0.5.
    Xoshiro256 rng(53);
    for (const Constellation* c : all_cons) {
        std::vector<double> ml(std::size_t(c->q())), ex(std::size_t(c->q()));
        for (int trial = 0; trial < 500; ++trial) {
            Cplx x = c->point(rng() % c->size());
            // random phase, magnitude bounded away from deep fades (a faded
            // symbol is back in the low-effective-SNR regime excluded above)
            double th = rng.uniform() * 6.28, mag = 0.7 + 0.8 * rng.uniform();
            Cplx h = mag * Cplx(std::cos(th), std::sin(th));

            double s2 = 1e-3;
            Cplx y = h * x + Cplx(rng.gaussian(), rng.gaussian()) * std::sqrt(s2 * 0.5);
            llr_maxlog_symbol(y, h, s2, *c, ml.data());
            llr_exact_symbol(y, h, s2, *c, ex.data());
            for (int j = 0; j < c->q(); ++j)
                if (std::abs(ex[j]) > 1e-9) CHECK((ml[j] > 0) == (ex[j] > 0));

            s2 = 0.05;
            y = h * x + Cplx(rng.gaussian(), rng.gaussian()) * std::sqrt(s2 * 0.5);
            llr_maxlog_symbol(y, h, s2, *c, ml.data());
            llr_exact_symbol(y, h, s2, *c, ex.data());
            for (int j = 0; j < c->q(); ++j)
                if (std::abs(ex[j]) > 0.5) CHECK((ml[j] > 0) == (ex[j] > 0));
        }
    }
}

TEST_CASE("symmetric input yields zero llr") {
    const Constellation& q = Constellation::qpsk();
    double l[2];
    llr_maxlog_symbol(Cplx(0, 0), Cplx(1, 0), 0.5, q, l);
    CHECK(l[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(l[1] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("llr clamps at +-60") {
    const Constellation& b = Constellation::bpsk();
    double l;
    llr_maxlog_symbol(Cplx(1e6, 0), Cplx(1, 0), 1.0, b, &l);
    CHECK(l == -kLlrClamp);
    llr_exact_symbol(Cplx(-1e6, 0), Cplx(1, 0), 1.0, b, &l);
    CHECK(l == kLlrClamp);
}

TEST_CASE("llr rejects non-positive sigma2") {
    double l[6];
    CHECK_THROWS_AS(llr_maxlog_symbol(Cplx(1, 0), Cplx(1, 0), 0.0, Constellation::bpsk(), l),
                    std::invalid_argument);
    CHECK_THROWS_AS(llr_exact_symbol(Cplx(1, 0), Cplx(1, 0), -1.0, Constellation::qpsk(), l),
                    std::invalid_argument);
}

TEST_CASE("slicing agrees with max-log llr sign thresholding for bpsk and qpsk") {
    for (const Constellation* c : {&Constellation::bpsk(), &Constellation::qpsk()}) {
        std::vector<double> l(std::size_t(c->q()));
        for (double re = -2.0; re <= 2.0; re += 0.173) {
            for (double im = -2.0; im <= 2.0; im += 0.173) {
                Cplx y(re + 0.013, im - 0.007);  // keep off decision boundaries
                std::size_t label = slice(y, *c);
                llr_maxlog_symbol(y, Cplx(1, 0), 0.3, *c, l.data());
                for (int j = 0; j < c->q(); ++j) {
                    if (std::abs(l[j]) < 1e-9) continue;
                    bool bit_from_llr = l[j] > 0;
                    bool bit_from_slice = (label >> (c->q() - 1 - j)) & 1u;
                    CHECK(bit_from_llr == bit_from_slice);
                }
            }
        }
    }
}

TEST_CASE("constellation lookup by name") {
    CHECK(&Constellation::by_name("bpsk") == &Constellation::bpsk());
    CHECK(&Constellation::by_name("qam64") == &Constellation::qam64());
    CHECK_THROWS_AS((void)Constellation::by_name("8psk"), std::invalid_argument);
}
