#include "doctest.h"

#include <cmath>
#include <vector>

#include "grandsim/linear_code.hpp"
#include "grandsim/oracle.hpp"

using namespace grandsim;

namespace {

// [7,4] single-error-correcting fixture, systematic [I | P]
LinearCode hamming74() {
    GF2Matrix G(4, 7);
    const char* p[4] = {"110", "101", "011", "111"};
    for (std::size_t i = 0; i < 4; ++i) {
        G.set(i, i, true);
        for (std::size_t j = 0; j < 3; ++j)
            if (p[i][j] == '1') G.set(i, 4 + j, true);
    }
    return LinearCode::from_generator(std::move(G), CodeKind::from_file);
}

} // namespace

TEST_CASE("exhaustive pattern sort pins the cardinality enumeration") {
    auto pats = brute_sort_patterns(3, PatternMetric::hamming);
    REQUIRE(pats.size() == 8);
    std::vector<std::vector<uint32_t>> want = {
        {}, {1}, {2}, {3}, {1, 2}, {1, 3}, {2, 3}, {1, 2, 3}};
    for (std::size_t i = 0; i < 8; ++i) REQUIRE(pats[i].flips == want[i]);
}

TEST_CASE("exhaustive pattern sort orders rank sums with ties by size then lex") {
    auto pats = brute_sort_patterns(5, PatternMetric::logistic);
    REQUIRE(pats[0].flips.empty());
    REQUIRE(pats[1].flips == std::vector<uint32_t>{1});
    REQUIRE(pats[4].flips == std::vector<uint32_t>{1, 2});  // after all three lighter singles
    // nondecreasing weight throughout
    for (std::size_t i = 1; i < pats.size(); ++i) REQUIRE(pats[i].weight >= pats[i - 1].weight);
}

TEST_CASE("exhaustive pattern sort with distinct powers walks every subset sum") {
    std::vector<double> rel = {1.0, 2.0, 4.0};
    auto pats = brute_sort_patterns(3, PatternMetric::exact_eta, &rel);
    for (std::size_t i = 0; i < 8; ++i) REQUIRE(pats[i].weight == double(i));
}

TEST_CASE("brute ml decode recovers single flips of a perfect code") {
    auto code = hamming74();
    for (uint64_t m = 0; m < 16; ++m) {
        BitWord msg(4);
        for (int i = 0; i < 4; ++i)
            if (m >> i & 1) msg.set(i, true);
        BitWord cw = code.encode(msg);
        for (std::size_t j = 0; j < 7; ++j) {
            BitWord rx = cw;
            rx.flip(j);
            auto best = exhaustive_ml_decode(code, rx);
            REQUIRE(best.word == cw);
            REQUIRE(best.score == 1.0);
            REQUIRE(best.num_ties == 1);  // a perfect code has one nearest neighbour
        }
    }
}

TEST_CASE("brute ml decode breaks distance ties toward the smallest code-word") {
    // repetition code of length 2: 00 and 11; the received word sits at
    // distance one from both
    GF2Matrix G(1, 2);
    G.set(0, 0, true);
    G.set(0, 1, true);
    auto code = LinearCode::from_generator(std::move(G), CodeKind::from_file);
    BitWord rx = BitWord::from_string("10");
    auto best = exhaustive_ml_decode(code, rx);
    REQUIRE(best.score == 1.0);
    REQUIRE(best.num_ties == 2);
    REQUIRE(best.word == BitWord::from_string("00"));
}

TEST_CASE("brute ml decode weighs flips by reliability") {
    auto code = hamming74();
    BitWord cw = code.encode(BitWord::from_string("1011"));
    BitWord rx = cw;
    rx.flip(2);
    rx.flip(5);
    // both flipped bits are nearly free, everything else is expensive:
    // the double flip outscores any cheaper-looking single
    std::vector<double> rel = {9, 9, 0.01, 9, 9, 0.02, 9};
    auto best = exhaustive_ml_decode(code, rx, &rel);
    REQUIRE(best.word == cw);
    REQUIRE(best.score == doctest::Approx(0.03).epsilon(1e-12));
}

TEST_CASE("closed-form fading error rates") {
    const double p1 = rayleigh_bpsk_bit_error(1.0);
    REQUIRE(p1 == doctest::Approx(0.5 * (1.0 - std::sqrt(0.5))).epsilon(1e-15));
    REQUIRE(p1 == doctest::Approx(0.14644660940672624).epsilon(1e-12));
    REQUIRE(analytic_uncoded_bler(1.0, 1) == doctest::Approx(p1).epsilon(1e-15));
    // more bits per block can only hurt
    REQUIRE(analytic_uncoded_bler(1.0, 16) > analytic_uncoded_bler(1.0, 8));
    // vanishing noise drives both to zero
    REQUIRE(rayleigh_bpsk_bit_error(1e12) < 1e-6);
    REQUIRE(analytic_uncoded_bler(1e12, 128) < 1e-3);
    // no signal: coin flip per bit
    REQUIRE(rayleigh_bpsk_bit_error(0.0) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("oracle size refusals") {
    CHECK_THROWS_AS(brute_sort_patterns(24, PatternMetric::hamming), std::invalid_argument);
    auto big = random_linear_code(40, 24, 1);
    BitWord rx(40);
    CHECK_THROWS_AS(exhaustive_ml_decode(big, rx), std::invalid_argument);
    CHECK_THROWS_AS(rayleigh_bpsk_bit_error(-1.0), std::invalid_argument);
}
