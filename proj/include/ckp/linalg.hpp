#pragma once

#include "ckp/rational.hpp"

#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <vector>

namespace ckp {

using IntVec = std::vector<Int>;
using RatVec = std::vector<Rat>;

inline IntVec to_int_vec(std::initializer_list<long> xs) {
    IntVec v;
    v.reserve(xs.size());
    for (long x : xs) v.emplace_back(x);
    return v;
}

inline Int dot(const IntVec& a, const IntVec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: length mismatch");
    Int s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline Rat dot(const IntVec& a, const RatVec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: length mismatch");
    Rat s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += Rat(a[i]) * b[i];
    return s;
}

inline Int norm_sq(const IntVec& a) { return dot(a, a); }

// Dense integer matrix, row-major.
struct IntMat {
    size_t rows = 0, cols = 0;
    std::vector<Int> d;

    IntMat() = default;
    IntMat(size_t r, size_t c) : rows(r), cols(c), d(r * c) {}

    Int& at(size_t i, size_t j) { return d[i * cols + j]; }
    const Int& at(size_t i, size_t j) const { return d[i * cols + j]; }

    static IntMat identity(size_t n) {
        IntMat m(n, n);
        for (size_t i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    static IntMat from_rows(const std::vector<IntVec>& rows_in) {
        if (rows_in.empty()) return IntMat();
        IntMat m(rows_in.size(), rows_in[0].size());
        for (size_t i = 0; i < m.rows; ++i) {
            if (rows_in[i].size() != m.cols) throw std::invalid_argument("from_rows: ragged rows");
            for (size_t j = 0; j < m.cols; ++j) m.at(i, j) = rows_in[i][j];
        }
        return m;
    }

    IntVec col(size_t j) const {
        IntVec v(rows);
        for (size_t i = 0; i < rows; ++i) v[i] = at(i, j);
        return v;
    }

    IntVec row(size_t i) const {
        IntVec v(cols);
        for (size_t j = 0; j < cols; ++j) v[j] = at(i, j);
        return v;
    }

    void swap_cols(size_t a, size_t b) {
        for (size_t i = 0; i < rows; ++i) std::swap(at(i, a), at(i, b));
    }

    bool operator==(const IntMat& o) const { return rows == o.rows && cols == o.cols && d == o.d; }
};

inline IntMat mul(const IntMat& a, const IntMat& b) {
    if (a.cols != b.rows) throw std::invalid_argument("mul: shape mismatch");
    IntMat c(a.rows, b.cols);
    for (size_t i = 0; i < a.rows; ++i)
        for (size_t k = 0; k < a.cols; ++k) {
            const Int& aik = a.at(i, k);
            if (aik == 0) continue;
            for (size_t j = 0; j < b.cols; ++j) c.at(i, j) += aik * b.at(k, j);
        }
    return c;
}

inline IntVec mul(const IntMat& a, const IntVec& x) {
    if (a.cols != x.size()) throw std::invalid_argument("mul: shape mismatch");
    IntVec y(a.rows);
    for (size_t i = 0; i < a.rows; ++i) {
        Int s = 0;
        for (size_t j = 0; j < a.cols; ++j) s += a.at(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

inline IntMat transpose(const IntMat& a) {
    IntMat t(a.cols, a.rows);
    for (size_t i = 0; i < a.rows; ++i)
        for (size_t j = 0; j < a.cols; ++j) t.at(j, i) = a.at(i, j);
    return t;
}

inline Int col_norm_sq(const IntMat& a, size_t j) {
    Int s = 0;
    for (size_t i = 0; i < a.rows; ++i) s += a.at(i, j) * a.at(i, j);
    return s;
}

// Bareiss fraction-free determinant.
inline Int det(IntMat a) {
    if (a.rows != a.cols) throw std::invalid_argument("det: not square");
    size_t n = a.rows;
    if (n == 0) return 1;
    Int sign = 1, prev = 1;
    for (size_t k = 0; k + 1 < n; ++k) {
        if (a.at(k, k) == 0) {
            size_t p = k + 1;
            while (p < n && a.at(p, k) == 0) ++p;
            if (p == n) return 0;
            for (size_t j = 0; j < n; ++j) std::swap(a.at(k, j), a.at(p, j));
            sign = -sign;
        }
        for (size_t i = k + 1; i < n; ++i)
            for (size_t j = k + 1; j < n; ++j)
                a.at(i, j) = (a.at(i, j) * a.at(k, k) - a.at(i, k) * a.at(k, j)) / prev;
        prev = a.at(k, k);
    }
    return sign * a.at(n - 1, n - 1);
}

// Rank over the rationals via Gaussian elimination.
inline size_t rank(const IntMat& a) {
    std::vector<RatVec> m(a.rows, RatVec(a.cols));
    for (size_t i = 0; i < a.rows; ++i)
        for (size_t j = 0; j < a.cols; ++j) m[i][j] = Rat(a.at(i, j));
    size_t r = 0;
    for (size_t c = 0; c < a.cols && r < a.rows; ++c) {
        size_t p = r;
        while (p < a.rows && m[p][c] == 0) ++p;
        if (p == a.rows) continue;
        std::swap(m[p], m[r]);
        for (size_t i = 0; i < a.rows; ++i) {
            if (i == r || m[i][c] == 0) continue;
            Rat f = m[i][c] / m[r][c];
            for (size_t j = c; j < a.cols; ++j) m[i][j] -= f * m[r][j];
        }
        ++r;
    }
    return r;
}

// Exact inverse of an integer matrix whose inverse is integral (|det| = 1).
// Throws if singular or if the inverse has a non-integer entry.
inline IntMat inverse_unimodular(const IntMat& u) {
    if (u.rows != u.cols) throw std::invalid_argument("inverse: not square");
    size_t n = u.rows;
    std::vector<RatVec> m(n, RatVec(2 * n));
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) m[i][j] = Rat(u.at(i, j));
        m[i][n + i] = 1;
    }
    for (size_t c = 0; c < n; ++c) {
        size_t p = c;
        while (p < n && m[p][c] == 0) ++p;
        if (p == n) throw std::invalid_argument("inverse: singular matrix");
        std::swap(m[p], m[c]);
        Rat piv = m[c][c];
        for (size_t j = 0; j < 2 * n; ++j) m[c][j] /= piv;
        for (size_t i = 0; i < n; ++i) {
            if (i == c || m[i][c] == 0) continue;
            Rat f = m[i][c];
            for (size_t j = 0; j < 2 * n; ++j) m[i][j] -= f * m[c][j];
        }
    }
    IntMat inv(n, n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            const Rat& v = m[i][n + j];
            if (!is_integer(v)) throw std::invalid_argument("inverse: not unimodular");
            inv.at(i, j) = num(v);
        }
    return inv;
}

}  // namespace ckp
