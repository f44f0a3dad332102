#pragma once

#include <cstddef>
#include <vector>
#include <stdexcept>
#include <utility>

#include "bitword.hpp"

namespace grandsim {

// Dense GF(2) matrix, rows stored as packed BitWord.
class GF2Matrix {
public:
    GF2Matrix() = default;
    GF2Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), r_(rows, BitWord(cols)) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    bool get(std::size_t i, std::size_t j) const { return r_[i].get(j); }
    void set(std::size_t i, std::size_t j, bool v) { r_[i].set(j, v); }
    const BitWord& row(std::size_t i) const { return r_[i]; }
    BitWord& row(std::size_t i) { return r_[i]; }

    // y = x * M (x is a row vector of length rows()); result length cols().
    BitWord mul_left(const BitWord& x) const {
        if (x.size() != rows_) throw std::invalid_argument("GF2Matrix: mul_left size");
        BitWord y(cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            if (x.get(i)) y ^= r_[i];
        return y;
    }

    // y = M * x (column vector of length cols()); result length rows().
    BitWord mul_right(const BitWord& x) const {
        if (x.size() != cols_) throw std::invalid_argument("GF2Matrix: mul_right size");
        BitWord y(rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            if (r_[i].dot(x)) y.set(i, true);
        return y;
    }

    GF2Matrix transpose() const {
        GF2Matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                if (get(i, j)) t.set(j, i, true);
        return t;
    }

    static GF2Matrix identity(std::size_t n) {
        GF2Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.set(i, i, true);
        return m;
    }

    // In-place row reduction to reduced row echelon form.
    // Returns the pivot column of each pivot row, in order (size == rank).
    std::vector<std::size_t> rref() {
        std::vector<std::size_t> pivots;
        std::size_t pr = 0;
        for (std::size_t c = 0; c < cols_ && pr < rows_; ++c) {
            std::size_t sel = pr;
            while (sel < rows_ && !r_[sel].get(c)) ++sel;
            if (sel == rows_) continue;
            std::swap(r_[pr], r_[sel]);
            for (std::size_t i = 0; i < rows_; ++i)
                if (i != pr && r_[i].get(c)) r_[i] ^= r_[pr];
            pivots.push_back(c);
            ++pr;
        }
        return pivots;
    }

    std::size_t rank() const {
        GF2Matrix m = *this;
        return m.rref().size();
    }

    // Basis of { x : M x = 0 }, one BitWord of length cols() per free column.
    std::vector<BitWord> nullspace_basis() const {
        GF2Matrix m = *this;
        std::vector<std::size_t> pivots = m.rref();
        std::vector<bool> is_pivot(cols_, false);
        for (std::size_t c : pivots) is_pivot[c] = true;
        std::vector<BitWord> basis;
        for (std::size_t fc = 0; fc < cols_; ++fc) {
            if (is_pivot[fc]) continue;
            BitWord v(cols_);
            v.set(fc, true);
            for (std::size_t pi = 0; pi < pivots.size(); ++pi)
                if (m.r_[pi].get(fc)) v.set(pivots[pi], true);
            basis.push_back(std::move(v));
        }
        return basis;
    }

    friend bool operator==(const GF2Matrix& a, const GF2Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.r_ == b.r_;
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<BitWord> r_;
};

} // namespace grandsim
