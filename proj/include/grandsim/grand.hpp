#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "bitword.hpp"
#include "linear_code.hpp"
#include "patterns.hpp"

namespace grandsim {

enum class ScheduleKind { hamming, logistic, logistic_hamming_tie, exact_eta };

struct QuerySchedule {
    ScheduleKind kind = ScheduleKind::hamming;
    uint64_t max_queries = 0;  // 0 = unlimited
    uint32_t bits_per_symbol = 1;  // logistic_hamming_tie grouping
};

// Rank r (1-based) holds the bit position perm[r-1]; sorted_rel[r-1] is that
// bit's reliability.  Stable: equal reliabilities keep bit-position order.
struct RankPermutation {
    std::vector<uint32_t> perm;
    std::vector<double> sorted_rel;
};

inline RankPermutation rank_bits(const std::vector<double>& rel) {
    for (double v : rel)
        if (!(v >= 0.0)) throw std::invalid_argument("rank_bits: reliabilities must be nonnegative");
    RankPermutation rp;
    rp.perm.resize(rel.size());
    std::iota(rp.perm.begin(), rp.perm.end(), 0u);
    std::stable_sort(rp.perm.begin(), rp.perm.end(),
                     [&](uint32_t a, uint32_t b) { return rel[a] < rel[b]; });
    rp.sorted_rel.resize(rel.size());
    for (std::size_t i = 0; i < rel.size(); ++i) rp.sorted_rel[i] = rel[rp.perm[i]];
    return rp;
}

struct DecodeResult {
    BitWord word;
    bool abandoned = false;
    uint64_t queries = 0;
    double found_weight = 0.0;  // metric weight of the accepted pattern; 0 if abandoned
};

namespace detail {

inline std::unique_ptr<PatternStream> make_stream(const QuerySchedule& schedule, uint32_t n,
                                                  const RankPermutation* rp) {
    switch (schedule.kind) {
        case ScheduleKind::hamming:
            return make_hamming_patterns(n);
        case ScheduleKind::logistic:
            return make_logistic_patterns(n);
        case ScheduleKind::logistic_hamming_tie:
            return make_logistic_hamming_tie_patterns(n, schedule.bits_per_symbol);
        case ScheduleKind::exact_eta:
            return make_exact_eta_patterns(rp->sorted_rel);
    }
    throw std::invalid_argument("make_stream: unknown schedule kind");
}

} // namespace detail

// Invert putative noise patterns in schedule order until the result is a
// code-word.  Patterns are generated in rank space and mapped to bit
// positions through the reliability permutation; membership is tested by
// updating the hard word's syndrome with the flipped columns of H.  On an
// exhausted budget the unmodified hard word comes back marked abandoned
// (the harness counts it as a block error either way).
inline DecodeResult grand_decode(const BitWord& hard_word, const std::vector<double>* rel,
                                 const QuerySchedule& schedule, const LinearCode& code) {
    const std::size_t n = code.n();
    if (hard_word.size() != n) throw std::invalid_argument("grand_decode: word length != n");
    RankPermutation rp;
    if (rel) {
        if (rel->size() != n) throw std::invalid_argument("grand_decode: rel length != n");
        rp = rank_bits(*rel);
    } else if (schedule.kind != ScheduleKind::hamming) {
        throw std::invalid_argument("grand_decode: this schedule needs reliabilities");
    } else {
        rp.perm.resize(n);
        std::iota(rp.perm.begin(), rp.perm.end(), 0u);
    }

    std::unique_ptr<PatternStream> stream = detail::make_stream(schedule, uint32_t(n), &rp);
    const uint64_t budget = schedule.max_queries;

    DecodeResult res;
    res.word = hard_word;
    NoisePattern pat;

    auto accept = [&](const NoisePattern& p, uint64_t queries) {
        for (uint32_t r : p.flips) res.word.flip(rp.perm[r - 1]);
        res.queries = queries;
        res.found_weight = p.weight;
        res.abandoned = false;
    };

    const std::size_t red = code.redundancy();
    uint64_t queries = 0;
    if (red <= 64 && red > 0) {
        // single-word syndrome fast path
        std::vector<uint64_t> cols(n);
        for (std::size_t j = 0; j < n; ++j) cols[j] = code.col_syndrome(j).word(0);
        uint64_t s0 = code.syndrome(hard_word).word(0);
        while ((budget == 0 || queries < budget) && stream->next(pat)) {
            ++queries;
            uint64_t s = s0;
            for (uint32_t r : pat.flips) s ^= cols[rp.perm[r - 1]];
            if (s == 0) {
                accept(pat, queries);
                return res;
            }
        }
    } else if (red == 0) {
        // rate-1 code: the first query (empty pattern) always hits
        if ((budget == 0 || queries < budget) && stream->next(pat)) {
            accept(pat, 1);
            return res;
        }
    } else {
        BitWord s0 = code.syndrome(hard_word);
        BitWord s(red);
        while ((budget == 0 || queries < budget) && stream->next(pat)) {
            ++queries;
            s = s0;
            for (uint32_t r : pat.flips) s ^= code.col_syndrome(rp.perm[r - 1]);
            if (!s.any()) {
                accept(pat, queries);
                return res;
            }
        }
    }

    res.abandoned = true;
    res.queries = queries;
    res.found_weight = 0.0;
    return res;
}

} // namespace grandsim
