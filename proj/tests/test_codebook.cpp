#include <doctest.h>

#include <grandsim/alist.hpp>
#include <grandsim/bch.hpp>
#include <grandsim/bitword.hpp>
#include <grandsim/crc.hpp>
#include <grandsim/gf2poly.hpp>
#include <grandsim/linear_code.hpp>
#include <grandsim/polar.hpp>
#include <grandsim/rng.hpp>

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

using namespace grandsim;

namespace {

// Systematic Hamming(7,4): G = [I4 | P], P rows {110, 101, 011, 111}.
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

BitWord random_word(std::size_t n, Xoshiro256& rng) {
    BitWord w(n);
    for (std::size_t i = 0; i < n; ++i) w.set(i, rng() & 1);
    return w;
}

std::string read_file(const std::string& path) {
    std::ifstream f(path);
    REQUIRE(f.good());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("poly2 arithmetic") {
    Poly2 a = Poly2::from_mask(0b1011);       // x^3 + x + 1
    Poly2 b = Poly2::from_mask(0b111);        // x^2 + x + 1
    CHECK(a.degree() == 3);
    CHECK((a * b).degree() == 5);
    CHECK(((a * b) % a).is_zero());
    CHECK(((a * b) % b).is_zero());
    Poly2 g = gcd(a * b, a);
    CHECK(g == a);
    CHECK(lcm(a, b) == a * b);
    CHECK(lcm(a, a) == a);

    // x^5 mod (x^3 + x + 1): x^3 = x+1, so x^5 = x^3 + x^2 = x^2 + x + 1
    Poly2 r = Poly2::x_pow(5) % a;
    CHECK(r == Poly2::from_mask(0b111));
}

TEST_CASE("poly2 crosses word boundaries") {
    Poly2 big = Poly2::x_pow(127) ^ Poly2::one();
    CHECK(big.degree() == 127);
    Poly2 p = Poly2::x_pow(70) * Poly2::x_pow(57);
    CHECK(p == Poly2::x_pow(127));
    CHECK((big % Poly2::from_mask(0b11)).is_zero());  // x+1 divides x^127 - 1
}

TEST_CASE("gf2m field minimal polynomials for m=7") {
    GF2mField f(7);
    CHECK(f.order() == 127);
    CHECK(f.minimal_poly(1).to_mask() == 0x89);  // x^7 + x^3 + 1
    CHECK(f.minimal_poly(3).to_mask() == 0x8F);  // x^7 + x^3 + x^2 + x + 1
    // conjugates share the minimal polynomial
    CHECK(f.minimal_poly(2) == f.minimal_poly(1));
    CHECK(f.minimal_poly(4) == f.minimal_poly(1));
    CHECK(f.minimal_poly(6) == f.minimal_poly(3));
}

TEST_CASE("crc is linear and detects flips") {
    CrcSpec crc = CrcSpec::crc11();
    crc.validate();
    Xoshiro256 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        BitWord a = random_word(40, rng);
        BitWord b = random_word(40, rng);
        uint64_t ra = crc_remainder(crc, a, 0, 40);
        uint64_t rb = crc_remainder(crc, b, 0, 40);
        uint64_t rx = crc_remainder(crc, a ^ b, 0, 40);
        CHECK(rx == (ra ^ rb));

        BitWord coded = crc_append(crc, a);
        CHECK(coded.size() == 51);
        CHECK(crc_check(crc, coded));
        BitWord damaged = coded;
        damaged.flip(rng() % 51);
        CHECK_FALSE(crc_check(crc, damaged));
    }
}

TEST_CASE("hamming74 fixture") {
    LinearCode code = hamming74();
    CHECK(code.n() == 7);
    CHECK(code.k() == 4);

    SUBCASE("all-zero info encodes to all-zero word") {
        BitWord z(4);
        CHECK_FALSE(code.encode(z).any());
        CHECK(code.is_member(BitWord(7)));
    }

    SUBCASE("fixture payload 1011") {
        BitWord info = BitWord::from_string("1011");
        BitWord cw = code.encode(info);
        CHECK(cw.to_string() == "1011010");
        CHECK(code.is_member(cw));
    }

    SUBCASE("exhaustive codebook: 16 members of 128 words, min distance 3") {
        int members = 0;
        std::size_t min_weight = 7;
        for (unsigned v = 0; v < 128; ++v) {
            BitWord w(7);
            for (int i = 0; i < 7; ++i) w.set(std::size_t(i), (v >> i) & 1);
            if (code.is_member(w)) {
                ++members;
                if (w.any()) min_weight = std::min(min_weight, w.popcount());
            }
        }
        CHECK(members == 16);
        CHECK(min_weight == 3);
    }

    SUBCASE("single bit flip leaves the codebook") {
        Xoshiro256 rng(11);
        for (int trial = 0; trial < 50; ++trial) {
            BitWord cw = code.encode(random_word(4, rng));
            BitWord flipped = cw;
            flipped.flip(rng() % 7);
            CHECK_FALSE(code.is_member(flipped));
        }
    }

    SUBCASE("length mismatches throw") {
        CHECK_THROWS_AS((void)code.encode(BitWord(5)), std::invalid_argument);
        CHECK_THROWS_AS((void)code.is_member(BitWord(8)), std::invalid_argument);
    }
}

TEST_CASE("random linear code") {
    LinearCode a = random_linear_code(16, 8, 7);
    LinearCode b = random_linear_code(16, 8, 7);
    LinearCode c = random_linear_code(16, 8, 8);
    CHECK(a.generator() == b.generator());
    CHECK_FALSE(a.generator() == c.generator());
    CHECK(a.kind() == CodeKind::random_linear);

    SUBCASE("unit info selects a generator row") {
        BitWord e1(8);
        e1.set(0, true);
        CHECK(a.encode(e1) == a.generator().row(0));
    }

    SUBCASE("codebook has 2^8 distinct words") {
        std::set<std::string> seen;
        for (unsigned v = 0; v < 256; ++v) {
            BitWord info(8);
            for (int i = 0; i < 8; ++i) info.set(std::size_t(i), (v >> i) & 1);
            BitWord cw = a.encode(info);
            CHECK(a.is_member(cw));
            seen.insert(cw.to_string());
        }
        CHECK(seen.size() == 256);
    }

    CHECK_THROWS_AS((void)random_linear_code(8, 8, 1), std::invalid_argument);
    CHECK_THROWS_AS((void)random_linear_code(8, 0, 1), std::invalid_argument);
}

TEST_CASE("rate1 code accepts every word") {
    LinearCode c = LinearCode::rate1(12);
    CHECK(c.n() == 12);
    CHECK(c.k() == 12);
    Xoshiro256 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        BitWord w = random_word(12, rng);
        CHECK(c.is_member(w));
        CHECK(c.encode(w) == w);
    }
}

TEST_CASE("bch m=4 t=1 is the (15,11) code with g = x^4+x+1") {
    BchCode bch = build_bch(4, 1);
    CHECK(bch.code.n() == 15);
    CHECK(bch.code.k() == 11);
    CHECK(bch.spec.generator_poly.to_mask() == 0x13);
    CHECK(bch.code.kind() == CodeKind::bch_cyclic);
}

TEST_CASE("bch m=7 t=2 is the (127,113) code") {
    BchCode bch = build_bch(7, 2);
    CHECK(bch.code.n() == 127);
    CHECK(bch.code.k() == 113);
    CHECK(bch.spec.generator_poly.degree() == 14);
    CHECK(bch.spec.generator_poly.to_mask() == 0x4377);

    SUBCASE("generator divides x^127 - 1") {
        Poly2 xn1 = Poly2::x_pow(127) ^ Poly2::one();
        CHECK(bch.spec.generator_poly.divides(xn1));
    }

    SUBCASE("generator equals lcm of the two minimal polynomials") {
        GF2mField f(7);
        CHECK(bch.spec.generator_poly == f.minimal_poly(1) * f.minimal_poly(3));
    }

    SUBCASE("encode/members agree with polynomial divisibility") {
        Xoshiro256 rng(21);
        for (int trial = 0; trial < 50; ++trial) {
            BitWord cw = bch.code.encode(random_word(113, rng));
            CHECK(bch.code.is_member(cw));
            CHECK(cyclic_member(bch.spec, cw));

            BitWord w = random_word(127, rng);
            CHECK(bch.code.is_member(w) == cyclic_member(bch.spec, w));
            BitWord near = cw;
            near.flip(rng() % 127);
            CHECK_FALSE(bch.code.is_member(near));
            CHECK_FALSE(cyclic_member(bch.spec, near));
        }
    }

    SUBCASE("corrects-up-to-t minimum distance lower bound via dual check") {
        // d >= 2t+1 = 5: every weight-1..4 pattern has nonzero syndrome.
        // Checking all of weight <= 2 exhaustively and sampling weights 3..4.
        for (std::size_t i = 0; i < 127; ++i) {
            BitWord w(127);
            w.set(i, true);
            CHECK_FALSE(bch.code.is_member(w));
            for (std::size_t j = i + 1; j < 127; ++j) {
                w.set(j, true);
                CHECK_FALSE(bch.code.is_member(w));
                w.set(j, false);
            }
        }
        Xoshiro256 rng(33);
        for (int trial = 0; trial < 2000; ++trial) {
            BitWord w(127);
            int weight = 3 + int(rng() % 2);
            while (int(w.popcount()) < weight) w.set(rng() % 127, true);
            CHECK_FALSE(bch.code.is_member(w));
        }
    }
}

TEST_CASE("bch construction failure when t exhausts the length") {
    CHECK_THROWS_AS((void)build_bch(4, 8), std::runtime_error);
    CHECK_THROWS_AS((void)build_bch(2, 1), std::invalid_argument);
    CHECK_THROWS_AS((void)build_bch(7, 0), std::invalid_argument);
}

TEST_CASE("polar transform is a self-inverse permutation of words") {
    Xoshiro256 rng(9);
    for (std::size_t n : {std::size_t(8), std::size_t(32), std::size_t(128)}) {
        for (int trial = 0; trial < 10; ++trial) {
            BitWord u = random_word(n, rng);
            BitWord x = u;
            polar_transform(x);
            polar_transform(x);
            CHECK(x == u);
        }
    }
    BitWord bad(12);
    CHECK_THROWS_AS(polar_transform(bad), std::invalid_argument);
}

TEST_CASE("pw reliability order matches the shipped data file") {
    std::vector<std::size_t> computed = pw_reliability_order(128);
    std::string text = read_file(std::string(GRANDSIM_DATA_DIR) + "/pw_order_128.txt");
    std::vector<std::size_t> loaded = parse_reliability_order(text, 128);
    CHECK(computed == loaded);
    // most reliable last: the all-ones index (highest weight) sits at the end
    CHECK(loaded.back() == 127);
    CHECK(loaded.front() == 0);
}

TEST_CASE("reliability order parser rejects bad input") {
    CHECK_THROWS_AS((void)parse_reliability_order("0 1 2", 4), std::invalid_argument);
    CHECK_THROWS_AS((void)parse_reliability_order("0 1 2 2", 4), std::invalid_argument);
    CHECK_THROWS_AS((void)parse_reliability_order("0 1 2 4", 4), std::invalid_argument);
}

TEST_CASE("ca-polar [128,105] with crc-11") {
    CaPolarCode cp = build_ca_polar(128, 105, CrcSpec::crc11(), pw_reliability_order(128));
    CHECK(cp.code.n() == 128);
    CHECK(cp.code.k() == 105);
    CHECK(cp.spec.info_set.size() == 116);
    CHECK(cp.code.kind() == CodeKind::ca_polar);

    SUBCASE("frozen set is the 12 least reliable indices") {
        std::vector<bool> info_mask(128, false);
        for (std::size_t i : cp.spec.info_set) info_mask[i] = true;
        std::vector<std::size_t> frozen;
        for (std::size_t i = 0; i < 128; ++i)
            if (!info_mask[i]) frozen.push_back(i);
        std::vector<std::size_t> expect = {0, 1, 2, 3, 4, 5, 6, 8, 9, 16, 32, 64};
        CHECK(frozen == expect);
    }

    SUBCASE("encode then is_member round trip, structural check agrees") {
        Xoshiro256 rng(17);
        for (int trial = 0; trial < 1000; ++trial) {
            BitWord cw = cp.code.encode(random_word(105, rng));
            CHECK(cp.code.is_member(cw));
            CHECK(ca_polar_structural_member(cp.spec, cw));
        }
    }

    SUBCASE("parity-check and structural membership agree on arbitrary words") {
        Xoshiro256 rng(19);
        for (int trial = 0; trial < 500; ++trial) {
            BitWord w = random_word(128, rng);
            CHECK(cp.code.is_member(w) == ca_polar_structural_member(cp.spec, w));
            BitWord cw = cp.code.encode(random_word(105, rng));
            cw.flip(rng() % 128);
            CHECK(cp.code.is_member(cw) == ca_polar_structural_member(cp.spec, cw));
        }
    }

    SUBCASE("flipping a frozen-position contribution breaks membership") {
        Xoshiro256 rng(23);
        BitWord cw = cp.code.encode(random_word(105, rng));
        std::vector<bool> info_mask(128, false);
        for (std::size_t i : cp.spec.info_set) info_mask[i] = true;
        for (std::size_t f = 0; f < 128; ++f) {
            if (info_mask[f]) continue;
            BitWord u = cw;
            polar_transform(u);
            u.flip(f);
            polar_transform(u);
            CHECK_FALSE(cp.code.is_member(u));
        }
    }

    SUBCASE("damaging the crc bits breaks membership") {
        Xoshiro256 rng(29);
        BitWord cw = cp.code.encode(random_word(105, rng));
        BitWord u = cw;
        polar_transform(u);
        // flip the u-domain position carrying the last crc bit
        u.flip(cp.spec.info_set.back());
        polar_transform(u);
        CHECK_FALSE(cp.code.is_member(u));
        CHECK_FALSE(ca_polar_structural_member(cp.spec, u));
    }
}

TEST_CASE("ca-polar with k = block length and no crc accepts everything") {
    CaPolarCode cp = build_ca_polar(16, 16, CrcSpec{}, pw_reliability_order(16));
    CHECK(cp.code.k() == 16);
    Xoshiro256 rng(31);
    for (int trial = 0; trial < 50; ++trial)
        CHECK(cp.code.is_member(random_word(16, rng)));
}

TEST_CASE("ca-polar rejects inconsistent sizes") {
    CHECK_THROWS_AS((void)build_ca_polar(100, 50, CrcSpec{}, {}), std::invalid_argument);
    CHECK_THROWS_AS((void)build_ca_polar(16, 10, CrcSpec::crc11(), pw_reliability_order(16)),
                    std::invalid_argument);  // 10 + 11 > 16
    std::vector<std::size_t> bad_order = pw_reliability_order(16);
    bad_order[0] = bad_order[1];
    CHECK_THROWS_AS((void)build_ca_polar(16, 8, CrcSpec{}, bad_order), std::invalid_argument);
}

TEST_CASE("alist round trip on the hamming fixture") {
    // H = [P^T | I3] of the systematic Hamming(7,4) code
    const std::string unpadded =
        "7 3\n"
        "3 4\n"
        "2 2 2 3 1 1 1\n"
        "4 4 4\n"
        "1 2\n"
        "1 3\n"
        "2 3\n"
        "1 2 3\n"
        "1\n"
        "2\n"
        "3\n"
        "1 2 4 5\n"
        "1 3 4 6\n"
        "2 3 4 7\n";
    const std::string padded =
        "7 3\n"
        "3 4\n"
        "2 2 2 3 1 1 1\n"
        "4 4 4\n"
        "1 2 0\n"
        "1 3 0\n"
        "2 3 0\n"
        "1 2 3\n"
        "1 0 0\n"
        "2 0 0\n"
        "3 0 0\n"
        "1 2 4 5\n"
        "1 3 4 6\n"
        "2 3 4 7\n";

    for (const std::string& text : {unpadded, padded}) {
        AlistCode ac = load_alist(text);
        CHECK(ac.code.n() == 7);
        CHECK(ac.code.k() == 4);
        CHECK(ac.code.kind() == CodeKind::from_file);
        CHECK(ac.info_positions.size() == 4);

        // same codebook as the direct fixture
        LinearCode direct = hamming74();
        int agree = 0;
        for (unsigned v = 0; v < 128; ++v) {
            BitWord w(7);
            for (int i = 0; i < 7; ++i) w.set(std::size_t(i), (v >> i) & 1);
            if (ac.code.is_member(w) == direct.is_member(w)) ++agree;
        }
        CHECK(agree == 128);
    }
}

TEST_CASE("alist error handling") {
    CHECK_THROWS_AS((void)load_alist(""), AlistParseError);
    CHECK_THROWS_AS((void)load_alist("\n \n"), AlistParseError);

    // index out of declared range (row index 4 > m=3)
    const std::string bad_index =
        "7 3\n3 4\n2 2 2 3 1 1 1\n4 4 4\n"
        "1 4\n1 3\n2 3\n1 2 3\n1\n2\n3\n"
        "1 2 4 5\n1 3 4 6\n2 3 4 7\n";
    CHECK_THROWS_AS((void)load_alist(bad_index), AlistParseError);

    // degree list entry above declared max
    const std::string bad_degree =
        "7 3\n3 4\n2 2 2 9 1 1 1\n4 4 4\n";
    CHECK_THROWS_AS((void)load_alist(bad_degree), AlistParseError);

    // truncated input
    const std::string truncated = "7 3\n3 4\n2 2 2 3 1 1 1\n";
    CHECK_THROWS_AS((void)load_alist(truncated), AlistParseError);

    try {
        (void)load_alist(bad_index);
        FAIL("expected parse error");
    } catch (const AlistParseError& e) {
        CHECK(e.line == 5);
    }

    // rank-deficient: duplicate row
    const std::string rank_def =
        "4 2\n2 2\n2 2 0 0\n2 2\n"
        "1 2\n1 2\n0 0\n0 0\n"
        "1 2\n1 2\n";
    CHECK_THROWS_AS((void)load_alist(rank_def), std::runtime_error);
}
