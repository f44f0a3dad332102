#pragma once

// Small-scale exhaustive references used by the tests: full pattern
// enumerations sorted by each query metric, brute-force maximum-likelihood
// decoding, and the closed-form block error rate for uncoded BPSK on a
// Rayleigh channel.  Everything here is deliberately slow and only accepts
// problem sizes where 2^n (or 2^k) enumeration stays trivial.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "bitword.hpp"
#include "linear_code.hpp"
#include "patterns.hpp"

namespace grandsim {

enum class PatternMetric { hamming, logistic, logistic_hamming_tie, exact_eta };

namespace detail {

struct ScoredSubset {
    uint32_t mask = 0;
    uint32_t card = 0;
    double weight = 0.0;
    std::vector<uint32_t> flips;  // ascending 1-based ranks
};

} // namespace detail

// All 2^n rank subsets in full decode order for the given metric.  The
// tie-break chain mirrors the streaming generators: hamming orders by
// (cardinality, colex), the weighted metrics by (weight, cardinality,
// lexicographic flips).  Refuses n > 20.
inline std::vector<NoisePattern> brute_sort_patterns(uint32_t n, PatternMetric metric,
                                                     const std::vector<double>* sorted_rel = nullptr,
                                                     uint32_t q = 1) {
    if (n > 20) throw std::invalid_argument("brute_sort_patterns: n too large for exhaustive enumeration");
    if (metric == PatternMetric::exact_eta) {
        if (!sorted_rel || sorted_rel->size() != n)
            throw std::invalid_argument("brute_sort_patterns: exact_eta needs n sorted reliabilities");
        for (std::size_t i = 0; i + 1 < sorted_rel->size(); ++i)
            if ((*sorted_rel)[i] > (*sorted_rel)[i + 1])
                throw std::invalid_argument("brute_sort_patterns: reliabilities must be sorted ascending");
    }
    if (metric == PatternMetric::logistic_hamming_tie && (q == 0 || n % q != 0))
        throw std::invalid_argument("brute_sort_patterns: q must divide n");

    std::vector<detail::ScoredSubset> all;
    all.reserve(std::size_t(1) << n);
    for (uint32_t mask = 0; mask < (uint32_t(1) << n); ++mask) {
        detail::ScoredSubset s;
        s.mask = mask;
        s.card = uint32_t(std::popcount(mask));
        s.flips.reserve(s.card);
        double w = 0.0;
        for (uint32_t r = 1; r <= n; ++r) {
            if (!(mask >> (r - 1) & 1u)) continue;
            s.flips.push_back(r);
            switch (metric) {
                case PatternMetric::hamming: w += 1.0; break;
                case PatternMetric::logistic: w += double(r); break;
                case PatternMetric::logistic_hamming_tie: w += double((r - 1) / q + 1); break;
                case PatternMetric::exact_eta: w += (*sorted_rel)[r - 1]; break;
            }
        }
        s.weight = w;
        all.push_back(std::move(s));
    }

    if (metric == PatternMetric::hamming) {
        // colex on equal-cardinality subsets is numeric order of the mask
        std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
            if (a.card != b.card) return a.card < b.card;
            return a.mask < b.mask;
        });
    } else {
        std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
            if (a.weight != b.weight) return a.weight < b.weight;
            if (a.card != b.card) return a.card < b.card;
            return std::lexicographical_compare(a.flips.begin(), a.flips.end(),
                                                b.flips.begin(), b.flips.end());
        });
    }

    std::vector<NoisePattern> out;
    out.reserve(all.size());
    for (auto& s : all) out.push_back(NoisePattern{std::move(s.flips), s.weight});
    return out;
}

namespace detail {

// true when a precedes b reading bit 0 first: the lowest position where
// they differ holds a zero in a
inline bool lex_less(const BitWord& a, const BitWord& b) {
    for (std::size_t w = 0; w < a.words(); ++w) {
        const uint64_t d = a.word(w) ^ b.word(w);
        if (d) return (a.word(w) >> std::countr_zero(d) & 1u) == 0;
    }
    return false;
}

} // namespace detail

struct MlResult {
    BitWord word;
    double score = 0.0;
    uint64_t num_ties = 0;  // code-words sharing the winning score
};

// Enumerates every code-word and returns the one whose difference from the
// hard word scores lowest: sum of the flipped bits' reliabilities, or plain
// Hamming distance when rel is null.  Reliability sums run in ascending
// value order; score ties fall to the lexicographically smallest code-word,
// with num_ties recording how many shared the minimum.  Refuses k > 20.
inline MlResult exhaustive_ml_decode(const LinearCode& code, const BitWord& hard,
                                     const std::vector<double>* rel = nullptr) {
    if (code.k() > 20) throw std::invalid_argument("exhaustive_ml_decode: k too large");
    if (hard.size() != code.n()) throw std::invalid_argument("exhaustive_ml_decode: word length != n");
    if (rel && rel->size() != code.n()) throw std::invalid_argument("exhaustive_ml_decode: rel length != n");

    MlResult best;
    bool have = false;
    std::vector<double> vals;
    for (uint64_t m = 0; m < (uint64_t(1) << code.k()); ++m) {
        BitWord msg(code.k());
        for (std::size_t i = 0; i < code.k(); ++i)
            if (m >> i & 1u) msg.set(i, true);
        BitWord cw = code.encode(msg);
        BitWord diff = hard ^ cw;
        double score = 0.0;
        if (rel) {
            vals.clear();
            for_each_set_bit(diff, [&](std::size_t j) { vals.push_back((*rel)[j]); });
            std::sort(vals.begin(), vals.end());
            for (double v : vals) score += v;
        } else {
            score = double(diff.popcount());
        }
        if (!have || score < best.score) {
            best.word = cw;
            best.score = score;
            best.num_ties = 1;
            have = true;
        } else if (score == best.score) {
            ++best.num_ties;
            if (detail::lex_less(cw, best.word)) best.word = cw;
        }
    }
    return best;
}

// Average bit error probability for coherently detected BPSK over a
// unit-power Rayleigh fade at average SNR gamma_bar
inline double rayleigh_bpsk_bit_error(double gamma_bar) {
    if (gamma_bar < 0.0) throw std::invalid_argument("rayleigh_bpsk_bit_error: negative SNR");
    return 0.5 * (1.0 - std::sqrt(gamma_bar / (1.0 + gamma_bar)));
}

// Block error rate of an uncoded n-bit word: one or more bit errors
inline double analytic_uncoded_bler(double gamma_bar, std::size_t n) {
    const double p = rayleigh_bpsk_bit_error(gamma_bar);
    return 1.0 - std::pow(1.0 - p, double(n));
}

} // namespace grandsim
