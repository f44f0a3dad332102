#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <queue>
#include <stdexcept>
#include <utility>
#include <vector>

namespace grandsim {

// A putative noise effect: sorted 1-based rank-domain indices to flip, plus
// the weight under the stream's metric (cardinality, logistic weight, or eta).
struct NoisePattern {
    std::vector<uint32_t> flips;
    double weight = 0.0;
};

// Every stream emits each subset of {1..N} exactly once, in nondecreasing
// weight, starting with the empty pattern.
class PatternStream {
public:
    virtual ~PatternStream() = default;
    virtual bool next(NoisePattern& out) = 0;
};

// All subsets by nondecreasing cardinality; colexicographic within fixed
// cardinality (advance the lowest index that can move, reset those below it).
class HammingStream final : public PatternStream {
public:
    explicit HammingStream(uint32_t n) : n_(n) {
        if (n < 1) throw std::invalid_argument("HammingStream: need n >= 1");
    }

    bool next(NoisePattern& out) override {
        if (card_ > n_) return false;
        out.flips.assign(cur_.begin(), cur_.end());
        out.weight = double(card_);
        advance();
        return true;
    }

private:
    void advance() {
        // next colex combination of size card_; sentinel n_+1 above the top
        for (uint32_t i = 0; i < card_; ++i) {
            uint32_t cap = (i + 1 < card_) ? cur_[i + 1] : n_ + 1;
            if (cur_[i] + 1 < cap) {
                ++cur_[i];
                for (uint32_t j = 0; j < i; ++j) cur_[j] = j + 1;
                return;
            }
        }
        ++card_;
        cur_.resize(card_);
        for (uint32_t j = 0; j < card_; ++j) cur_[j] = j + 1;
    }

    uint32_t n_, card_ = 0;
    std::vector<uint32_t> cur_;
};

// All subsets ordered by (sum of per-rank integer weights, cardinality, lex).
// Weights must be positive and nondecreasing in rank; logistic order uses
// weight r at rank r, the symbol-granular variant uses ceil(r/q).  Patterns
// for one total are found by depth-first search over increasing rank tuples
// with prefix-sum feasibility pruning; nothing near 2^N is ever materialized.
// Feasibility as an interval test is exact because both weight families step
// by 0 or 1, making the achievable sums of any fixed-cardinality suffix
// choice a contiguous integer range.
class WeightedRankStream final : public PatternStream {
public:
    explicit WeightedRankStream(std::vector<uint32_t> weights) : w_(std::move(weights)) {
        if (w_.empty()) throw std::invalid_argument("WeightedRankStream: need n >= 1");
        for (std::size_t i = 0; i < w_.size(); ++i) {
            if (w_[i] < 1) throw std::invalid_argument("WeightedRankStream: weights must be >= 1");
            if (i && w_[i] < w_[i - 1])
                throw std::invalid_argument("WeightedRankStream: weights must be nondecreasing");
        }
        n_ = uint32_t(w_.size());
        prefix_.resize(n_ + 1, 0);
        for (uint32_t i = 0; i < n_; ++i) prefix_[i + 1] = prefix_[i] + w_[i];
        total_ = 0;   // current target weight W
        card_ = 0;    // current cardinality within W
        state_ = State::emit_empty;
    }

    bool next(NoisePattern& out) override {
        switch (state_) {
            case State::emit_empty:
                out.flips.clear();
                out.weight = 0.0;
                total_ = 1;
                card_ = 0;
                state_ = State::scan;
                return true;
            case State::scan:
                break;
            case State::done:
                return false;
        }
        while (true) {
            if (card_ == 0 || !advance()) {
                if (!next_group()) {
                    state_ = State::done;
                    return false;
                }
                if (!descend(0, 1, total_)) continue;  // group empty, try next
            }
            out.flips = cur_;
            out.weight = double(total_);
            return true;
        }
    }

private:
    enum class State { emit_empty, scan, done };

    // smallest possible sum of `count` ranks all >= `from` (1-based)
    uint64_t min_sum(uint32_t from, uint32_t count) const {
        if (count == 0) return 0;
        if (from + count - 1 > n_) return ~uint64_t(0);  // infeasible
        return prefix_[from + count - 1] - prefix_[from - 1];
    }

    // largest possible sum of `count` distinct ranks <= n
    uint64_t max_sum(uint32_t count) const {
        return prefix_[n_] - prefix_[n_ - count];
    }

    // Move to the next (W, cardinality) group that could contain patterns.
    bool next_group() {
        while (true) {
            ++card_;
            if (card_ > n_ || min_sum(1, card_) > total_) {
                ++total_;
                card_ = 0;
                if (total_ > prefix_[n_]) return false;
                continue;
            }
            if (max_sum(card_) < total_) continue;
            cur_.assign(card_, 0);
            return true;
        }
    }

    // Fill slots [depth..card) with the lexicographically smallest feasible
    // ranks starting at `from`, consuming `rem` weight exactly.
    bool descend(uint32_t depth, uint32_t from, uint64_t rem) {
        for (uint32_t d = depth; d < card_; ++d) {
            uint32_t left = card_ - d - 1;  // slots after this one
            uint32_t r = from;
            while (true) {
                if (r + left > n_) return false;
                uint64_t need_after = (rem >= w_[r - 1]) ? rem - w_[r - 1] : ~uint64_t(0);
                if (need_after == ~uint64_t(0) || min_sum(r + 1, left) > need_after)
                    return false;  // weights only grow from here
                if (need_after <= max_sum_from(r + 1, left)) break;
                ++r;
            }
            cur_[d] = r;
            rem -= w_[r - 1];
            from = r + 1;
        }
        return rem == 0;
    }

    // largest possible sum of `count` distinct ranks all >= `from`
    uint64_t max_sum_from(uint32_t from, uint32_t count) const {
        if (count == 0) return 0;
        if (from + count - 1 > n_) return 0;  // infeasible: cannot place them
        return prefix_[n_] - prefix_[n_ - count];
    }

    // Advance within the (total_, card_) group to the next lex tuple.
    bool advance() {
        for (uint32_t d = card_; d-- > 0;) {
            // free the tail, try to restart slot d at cur_[d]+1
            uint64_t rem = total_;
            for (uint32_t i = 0; i < d; ++i) rem -= w_[cur_[i] - 1];
            if (descend(d, cur_[d] + 1, rem)) return true;
        }
        return false;
    }

    uint32_t n_ = 0;
    std::vector<uint32_t> w_;
    std::vector<uint64_t> prefix_;
    uint64_t total_ = 0;
    uint32_t card_ = 0;
    std::vector<uint32_t> cur_;
    State state_ = State::emit_empty;
};

inline std::vector<uint32_t> logistic_weights(uint32_t n) {
    std::vector<uint32_t> w(n);
    for (uint32_t i = 0; i < n; ++i) w[i] = i + 1;
    return w;
}

// rank weight = 1-based symbol index = ceil(rank / q)
inline std::vector<uint32_t> symbol_granular_weights(uint32_t n, uint32_t q) {
    if (q < 1 || n % q != 0)
        throw std::invalid_argument("symbol_granular_weights: n must be a multiple of q");
    std::vector<uint32_t> w(n);
    for (uint32_t i = 0; i < n; ++i) w[i] = i / q + 1;
    return w;
}

// All subsets by nondecreasing eta = sum of the (sorted, nondecreasing)
// reliabilities of flipped ranks; ties by (cardinality, lex).  Max-heap-free
// formulation: a min-priority-queue where popping a subset with maximum
// element m pushes S u {m+1} and (S \ {m}) u {m+1}, generating each subset
// exactly once.
class EtaHeapStream final : public PatternStream {
public:
    explicit EtaHeapStream(std::vector<double> sorted_rel) : rel_(std::move(sorted_rel)) {
        if (rel_.empty()) throw std::invalid_argument("EtaHeapStream: need n >= 1");
        for (std::size_t i = 0; i < rel_.size(); ++i) {
            if (!(rel_[i] >= 0.0))
                throw std::invalid_argument("EtaHeapStream: reliabilities must be nonnegative");
            if (i && rel_[i] < rel_[i - 1])
                throw std::invalid_argument("EtaHeapStream: reliabilities must be nondecreasing");
        }
        n_ = uint32_t(rel_.size());
        queue_.push(Entry{0.0, {}});
    }

    bool next(NoisePattern& out) override {
        if (queue_.empty()) return false;
        Entry top = queue_.top();
        queue_.pop();
        out.flips = top.flips;
        out.weight = top.eta;
        uint32_t m = top.flips.empty() ? 0 : top.flips.back();
        if (m + 1 <= n_) {
            Entry grow{0.0, top.flips};
            grow.flips.push_back(m + 1);
            grow.eta = sum_rel(grow.flips);
            queue_.push(std::move(grow));
            if (m >= 1) {
                Entry swap{0.0, std::move(top.flips)};
                swap.flips.back() = m + 1;
                swap.eta = sum_rel(swap.flips);
                queue_.push(std::move(swap));
            }
        }
        return true;
    }

private:
    struct Entry {
        double eta;
        std::vector<uint32_t> flips;
    };

    // Summed in ascending rank order so the value is bit-identical to any
    // reference that sums the same way (ties then break identically too).
    double sum_rel(const std::vector<uint32_t>& flips) const {
        double acc = 0.0;
        for (uint32_t r : flips) acc += rel_[r - 1];
        return acc;
    }
    struct Later {
        bool operator()(const Entry& a, const Entry& b) const {
            if (a.eta != b.eta) return a.eta > b.eta;
            if (a.flips.size() != b.flips.size()) return a.flips.size() > b.flips.size();
            return a.flips > b.flips;
        }
    };

    uint32_t n_ = 0;
    std::vector<double> rel_;
    std::priority_queue<Entry, std::vector<Entry>, Later> queue_;
};

inline std::unique_ptr<PatternStream> make_hamming_patterns(uint32_t n) {
    return std::make_unique<HammingStream>(n);
}

inline std::unique_ptr<PatternStream> make_logistic_patterns(uint32_t n) {
    return std::make_unique<WeightedRankStream>(logistic_weights(n));
}

inline std::unique_ptr<PatternStream> make_logistic_hamming_tie_patterns(uint32_t n, uint32_t q) {
    return std::make_unique<WeightedRankStream>(symbol_granular_weights(n, q));
}

inline std::unique_ptr<PatternStream> make_exact_eta_patterns(std::vector<double> sorted_rel) {
    return std::make_unique<EtaHeapStream>(std::move(sorted_rel));
}

} // namespace grandsim
