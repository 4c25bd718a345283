#pragma once

#include "ckp/linalg.hpp"

#include <stdexcept>

namespace ckp {

// g = gcd(a, b) > 0 with g = a x + b y.
inline Int ext_gcd(Int a, Int b, Int& x, Int& y) {
    Int x0 = 1, y0 = 0, x1 = 0, y1 = 1;
    while (b != 0) {
        Int q = a / b;
        Int tmp = a - q * b;
        a = b;
        b = tmp;
        tmp = x0 - q * x1;
        x0 = x1;
        x1 = tmp;
        tmp = y0 - q * y1;
        y0 = y1;
        y1 = tmp;
    }
    if (a < 0) {
        a = -a;
        x0 = -x0;
        y0 = -y0;
    }
    x = x0;
    y = y0;
    return a;
}

// Integer basis of the kernel lattice N(P) = { x in Z^n | P x = 0 } for a
// full-row-rank t x n integer matrix P. Unimodular column operations bring P to
// column echelon form [H | 0]; the transform columns over the zero block then
// generate every integer kernel point.
inline IntMat kernel_basis(const IntMat& p) {
    size_t t = p.rows, n = p.cols;
    if (t > n) throw std::invalid_argument("kernel_basis: more rows than columns");
    IntMat w = p;
    IntMat v = IntMat::identity(n);
    size_t piv = 0;
    for (size_t row = 0; row < t; ++row) {
        // clear row entries right of the pivot column with gcd column combinations
        for (size_t c = piv + 1; c < n; ++c) {
            if (w.at(row, c) == 0) continue;
            if (w.at(row, piv) == 0) {
                w.swap_cols(piv, c);
                v.swap_cols(piv, c);
                continue;
            }
            Int a = w.at(row, piv), b = w.at(row, c), x, y;
            Int g = ext_gcd(a, b, x, y);
            Int af = a / g, bf = b / g;
            for (size_t i = 0; i < t; ++i) {
                Int wi = w.at(i, piv), wj = w.at(i, c);
                w.at(i, piv) = x * wi + y * wj;
                w.at(i, c) = -bf * wi + af * wj;
            }
            for (size_t i = 0; i < n; ++i) {
                Int vi = v.at(i, piv), vj = v.at(i, c);
                v.at(i, piv) = x * vi + y * vj;
                v.at(i, c) = -bf * vi + af * vj;
            }
        }
        if (w.at(row, piv) == 0)
            throw std::invalid_argument("kernel_basis: rank-deficient input (rank < rows)");
        ++piv;
    }
    IntMat basis(n, n - t);
    for (size_t j = t; j < n; ++j)
        for (size_t i = 0; i < n; ++i) basis.at(i, j - t) = v.at(i, j);
    return basis;
}

}  // namespace ckp
