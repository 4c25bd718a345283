#pragma once

#include "ckp/kernel.hpp"
#include "ckp/linalg.hpp"
#include "ckp/lll.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace ckp {

struct LatticeMinima {
    std::vector<Int> values;  // squared norms, ascending
    IntMat witnesses;         // one lattice vector per column, pairwise independent
};

namespace detail {

// All lattice vectors of the column lattice of `basis` with squared norm <= radius_sq,
// by exact coefficient enumeration over a Gram-Schmidt cone. Returns coefficient
// vectors; the zero vector is excluded. Hard cap on enumerated points.
inline std::vector<IntVec> enumerate_short(const IntMat& basis, const Int& radius_sq,
                                           long max_points = 10'000'000) {
    size_t d = basis.cols;
    // rational GSO of the (already reduced) basis
    std::vector<std::vector<Rat>> bstar(d, std::vector<Rat>(basis.rows));
    std::vector<std::vector<Rat>> mu(d, std::vector<Rat>(d, Rat(0)));
    std::vector<Rat> bs_sq(d);
    for (size_t i = 0; i < d; ++i) {
        for (size_t row = 0; row < basis.rows; ++row) bstar[i][row] = Rat(basis.at(row, i));
        for (size_t j = 0; j < i; ++j) {
            Rat nu = 0;
            for (size_t row = 0; row < basis.rows; ++row) nu += Rat(basis.at(row, i)) * bstar[j][row];
            mu[i][j] = nu / bs_sq[j];
            for (size_t row = 0; row < basis.rows; ++row) bstar[i][row] -= mu[i][j] * bstar[j][row];
        }
        bs_sq[i] = 0;
        for (size_t row = 0; row < basis.rows; ++row) bs_sq[i] += bstar[i][row] * bstar[i][row];
        if (bs_sq[i] == 0) throw std::invalid_argument("enumerate_short: dependent columns");
    }
    std::vector<IntVec> found;
    IntVec coeff(d, Int(0));
    long count = 0;
    Rat radius(radius_sq);

    // depth-first from the last coordinate; t_i = x_i + sum_{j>i} mu_ji x_j
    auto rec = [&](auto&& self, size_t level, const Rat& remaining) -> void {
        size_t i = level - 1;
        Rat center = 0;  // -sum_{j>i} mu_ji x_j
        for (size_t j = level; j < d; ++j) center -= mu[j][i] * Rat(coeff[j]);
        // integers x with bs_sq[i] * (x - center)^2 <= remaining form an interval
        auto fits = [&](const Int& x) {
            Rat tshift = Rat(x) - center;
            return bs_sq[i] * tshift * tshift <= remaining;
        };
        Int start = round_half_down(center);
        if (!fits(start)) {
            if (fits(start + 1)) ++start;
            else return;
        }
        for (Int x = start;; --x) {
            if (!fits(x)) break;
            if (++count > max_points)
                throw std::runtime_error("enumerate_short: point budget exhausted");
            coeff[i] = x;
            Rat tshift = Rat(x) - center;
            Rat rem2 = remaining - bs_sq[i] * tshift * tshift;
            if (i == 0) {
                bool nonzero = false;
                for (const Int& cc : coeff) nonzero |= (cc != 0);
                if (nonzero) found.push_back(coeff);
            } else {
                self(self, i, rem2);
            }
        }
        for (Int x = start + 1;; ++x) {
            if (!fits(x)) break;
            if (++count > max_points)
                throw std::runtime_error("enumerate_short: point budget exhausted");
            coeff[i] = x;
            Rat tshift = Rat(x) - center;
            Rat rem2 = remaining - bs_sq[i] * tshift * tshift;
            if (i == 0) {
                bool nonzero = false;
                for (const Int& cc : coeff) nonzero |= (cc != 0);
                if (nonzero) found.push_back(coeff);
            } else {
                self(self, i, rem2);
            }
        }
        coeff[i] = 0;
    };
    rec(rec, d, radius);
    return found;
}

inline bool independent_of(const std::vector<IntVec>& chosen, const IntVec& v) {
    // rank test over the rationals
    size_t rows = chosen.size() + 1, cols = v.size();
    IntMat m(rows, cols);
    for (size_t i = 0; i < chosen.size(); ++i)
        for (size_t j = 0; j < cols; ++j) m.at(i, j) = chosen[i][j];
    for (size_t j = 0; j < cols; ++j) m.at(rows - 1, j) = v[j];
    return rank(m) == rows;
}

}  // namespace detail

// Exact successive minima of the column lattice by bounded enumeration. The
// enumeration radius is certified: the k-th smallest column of an LLL-reduced
// basis already provides k independent vectors within it.
inline LatticeMinima successive_minima(const IntMat& basis, int k) {
    if (basis.cols > 5)
        throw std::invalid_argument("successive_minima: refused, lattice dimension > 5");
    if (k < 1 || static_cast<size_t>(k) > basis.cols)
        throw std::invalid_argument("successive_minima: k out of range");
    ReducedBasis red = lll_reduce(basis, Rat(99, 100));
    std::vector<Int> colnorms;
    for (size_t j = 0; j < red.reduced.cols; ++j) colnorms.push_back(col_norm_sq(red.reduced, j));
    std::sort(colnorms.begin(), colnorms.end());
    Int radius_sq = colnorms[static_cast<size_t>(k - 1)];

    std::vector<IntVec> coeffs = detail::enumerate_short(red.reduced, radius_sq);
    std::vector<std::pair<Int, IntVec>> cands;
    for (const IntVec& c : coeffs) {
        IntVec v = mul(red.reduced, c);
        cands.emplace_back(norm_sq(v), std::move(v));
    }
    std::sort(cands.begin(), cands.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    LatticeMinima out;
    std::vector<IntVec> chosen;
    for (const auto& [nsq, v] : cands) {
        if (static_cast<int>(chosen.size()) == k) break;
        if (detail::independent_of(chosen, v)) {
            chosen.push_back(v);
            out.values.push_back(nsq);
        }
    }
    if (static_cast<int>(chosen.size()) != k)
        throw std::logic_error("successive_minima: radius failed to cover k independent vectors");
    out.witnesses = IntMat(basis.rows, static_cast<size_t>(k));
    for (int j = 0; j < k; ++j)
        for (size_t i = 0; i < basis.rows; ++i)
            out.witnesses.at(i, static_cast<size_t>(j)) = chosen[static_cast<size_t>(j)][i];
    return out;
}

// Exact check of the minima transfer bound Lambda_k(L(A)) <= (|r| + 1) alpha_k
// for A = [a; I] stacked from P, multipliers M and residual r. Comparisons stay
// rational: both sides squared, one square root isolated and squared again.
struct TransferReport {
    struct Entry {
        int k;
        Int lam_a_sq;   // Lambda_k(L(A))^2
        Int alpha_sq;   // Lambda_k(N(P))^2
        bool holds;
        bool equality;  // lam_a_sq == alpha_sq (tight embedding)
    };
    std::vector<Entry> entries;
    bool all_hold = true;
};

inline TransferReport check_minima_transfer(const IntMat& p, const IntVec& r,
                                            const std::vector<Int>& m) {
    size_t t = p.rows, n = p.cols;
    if (n > 5) throw std::invalid_argument("check_minima_transfer: refused, n > 5");
    if (m.size() != t) throw std::invalid_argument("check_minima_transfer: M length mismatch");
    if (r.size() != n) throw std::invalid_argument("check_minima_transfer: r length mismatch");
    IntMat kern = kernel_basis(p);
    IntMat a(n + 1, n);
    for (size_t j = 0; j < n; ++j) {
        Int s = r[j];
        for (size_t i = 0; i < t; ++i) s += p.at(i, j) * m[i];
        a.at(0, j) = s;
        a.at(j + 1, j) = 1;
    }
    Int r_sq = norm_sq(r);
    TransferReport rep;
    int kmax = static_cast<int>(n - t);
    LatticeMinima alpha = successive_minima(kern, kmax);
    LatticeMinima lam = successive_minima(a, kmax);
    for (int k = 1; k <= kmax; ++k) {
        const Int& L = lam.values[static_cast<size_t>(k - 1)];
        const Int& al = alpha.values[static_cast<size_t>(k - 1)];
        // holds iff L <= (sqrt(r_sq) + 1)^2 * al  ==  (r_sq + 1) al + 2 sqrt(r_sq) al
        Int diff = L - (r_sq + 1) * al;
        bool holds = diff <= 0 || diff * diff <= 4 * r_sq * al * al;
        rep.entries.push_back({k, L, al, holds, L == al});
        rep.all_hold &= holds;
    }
    return rep;
}

}  // namespace ckp
