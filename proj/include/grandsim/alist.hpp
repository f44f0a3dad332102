#pragma once

#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gf2.hpp"
#include "linear_code.hpp"

namespace grandsim {

struct AlistParseError : std::runtime_error {
    int line;
    AlistParseError(int ln, const std::string& what)
        : std::runtime_error("alist parse error at line " + std::to_string(ln) + ": " + what),
          line(ln) {}
};

struct AlistCode {
    LinearCode code;
    // Columns where the derived systematic generator carries its unit vectors
    // (the information positions of the recorded column permutation).
    std::vector<std::size_t> info_positions;
};

namespace detail {

class LineTokens {
public:
    explicit LineTokens(const std::string& text) : is_(text) {}

    // Next non-blank line split into ints; returns false at end of input.
    bool next(std::vector<long long>& out, int& line_no) {
        std::string line;
        while (std::getline(is_, line)) {
            ++line_;
            std::istringstream ls(line);
            out.clear();
            long long v;
            std::string tok;
            while (ls >> tok) {
                std::istringstream ts(tok);
                if (!(ts >> v) || !(ts >> std::ws).eof())
                    throw AlistParseError(line_, "non-integer token '" + tok + "'");
                out.push_back(v);
            }
            if (!out.empty()) {
                line_no = line_;
                return true;
            }
        }
        return false;
    }

    int line() const { return line_; }

private:
    std::istringstream is_;
    int line_ = 0;
};

} // namespace detail

// Standard alist sparse-matrix layout: "n m", max column/row degrees, the two
// degree lists, then per-column and per-row 1-based index lists (zero-padded
// or unpadded).  The matrix is read as the (m x n) parity check.
inline AlistCode load_alist(const std::string& text) {
    detail::LineTokens lt(text);
    std::vector<long long> t;
    int ln = 0;

    if (!lt.next(t, ln)) throw AlistParseError(0, "empty input");
    if (t.size() != 2 || t[0] <= 0 || t[1] <= 0)
        throw AlistParseError(ln, "expected 'n m' with positive counts");
    std::size_t n = std::size_t(t[0]), m = std::size_t(t[1]);

    if (!lt.next(t, ln)) throw AlistParseError(lt.line(), "missing max-degree line");
    if (t.size() != 2 || t[0] < 0 || t[1] < 0)
        throw AlistParseError(ln, "expected 'max_col_deg max_row_deg'");
    std::size_t dcmax = std::size_t(t[0]), drmax = std::size_t(t[1]);

    auto read_degrees = [&](std::size_t count, std::size_t dmax, const char* what) {
        std::vector<std::size_t> deg;
        while (deg.size() < count) {
            if (!lt.next(t, ln)) throw AlistParseError(lt.line(), std::string("missing ") + what);
            for (long long v : t) {
                if (deg.size() == count) throw AlistParseError(ln, std::string("too many ") + what);
                if (v < 0 || std::size_t(v) > dmax)
                    throw AlistParseError(ln, std::string(what) + " exceeds declared maximum");
                deg.push_back(std::size_t(v));
            }
        }
        return deg;
    };
    std::vector<std::size_t> col_deg = read_degrees(n, dcmax, "column degrees");
    std::vector<std::size_t> row_deg = read_degrees(m, drmax, "row degrees");

    GF2Matrix H(m, n);
    auto read_index_lists = [&](std::size_t count, std::size_t dmax,
                                const std::vector<std::size_t>& deg, std::size_t range,
                                const char* what, auto&& emit) {
        for (std::size_t i = 0; i < count; ++i) {
            if (!lt.next(t, ln)) throw AlistParseError(lt.line(), std::string("missing ") + what + " list");
            if (t.size() != deg[i] && t.size() != dmax)
                throw AlistParseError(ln, std::string(what) + " list has wrong entry count");
            std::size_t nonzero = 0;
            for (std::size_t j = 0; j < t.size(); ++j) {
                if (t[j] == 0) {
                    if (j < deg[i]) throw AlistParseError(ln, std::string(what) + " padding before all indices");
                    continue;
                }
                if (t[j] < 0 || std::size_t(t[j]) > range)
                    throw AlistParseError(ln, std::string(what) + " index out of range");
                if (j >= deg[i]) throw AlistParseError(ln, std::string(what) + " has extra nonzero entries");
                emit(i, std::size_t(t[j]) - 1);
                ++nonzero;
            }
            if (nonzero != deg[i])
                throw AlistParseError(ln, std::string(what) + " list does not match declared degree");
        }
    };
    read_index_lists(n, dcmax, col_deg, m, "column",
                     [&](std::size_t c, std::size_t r) { H.set(r, c, true); });
    GF2Matrix H2(m, n);
    read_index_lists(m, drmax, row_deg, n, "row",
                     [&](std::size_t r, std::size_t c) { H2.set(r, c, true); });
    if (!(H == H2))
        throw AlistParseError(lt.line(), "row lists disagree with column lists");

    if (H.rank() != m)
        throw std::runtime_error("load_alist: rank-deficient parity matrix");

    // Gaussian elimination on a copy: pivot columns become parity positions,
    // free columns the information positions of the systematic generator.
    GF2Matrix R = H;
    std::vector<std::size_t> pivots = R.rref();
    std::vector<bool> is_pivot(n, false);
    for (std::size_t c : pivots) is_pivot[c] = true;

    AlistCode out;
    for (std::size_t c = 0; c < n; ++c)
        if (!is_pivot[c]) out.info_positions.push_back(c);
    out.code = LinearCode::from_parity(std::move(H), CodeKind::from_file);
    return out;
}

} // namespace grandsim
