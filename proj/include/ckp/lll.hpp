#pragma once

#include "ckp/linalg.hpp"
#include "ckp/rational.hpp"

#include <stdexcept>
#include <vector>

namespace ckp {

struct ReducedBasis {
    IntMat original;   // B, m x n, independent columns
    IntMat reduced;    // B~ = B U
    IntMat transform;  // U, n x n, |det U| = 1
    Rat delta;
};

namespace detail {

// Integer Gram-Schmidt bookkeeping: d[0] = 1, d[i+1] = det Gram(b_0..b_i),
// lambda[i][j] = d[j+1] * mu_ij. All exact integers.
struct IntGso {
    std::vector<Int> d;
    std::vector<std::vector<Int>> lambda;

    // Returns the index of the first dependent column, or -1 if independent.
    long compute(const IntMat& b) {
        size_t n = b.cols;
        d.assign(n + 1, Int(1));
        lambda.assign(n, std::vector<Int>(n, Int(0)));
        for (size_t i = 0; i < n; ++i) {
            for (size_t j = 0; j <= i; ++j) {
                Int u = 0;
                for (size_t row = 0; row < b.rows; ++row) u += b.at(row, i) * b.at(row, j);
                for (size_t k = 0; k < j; ++k)
                    u = (d[k + 1] * u - lambda[i][k] * lambda[j][k]) / d[k];
                if (j < i)
                    lambda[i][j] = u;
                else {
                    d[i + 1] = u;
                    if (u <= 0) return static_cast<long>(i);
                }
            }
        }
        return -1;
    }
};

class LllReducer {
public:
    LllReducer(IntMat b, Rat delta) : b_(std::move(b)), delta_(std::move(delta)) {
        n_ = b_.cols;
        u_ = IntMat::identity(n_);
        dp_ = num(delta_);
        dq_ = den(delta_);
        long dep = gso_.compute(b_);
        if (dep >= 0)
            throw std::invalid_argument("lll_reduce: columns dependent, rank <= " +
                                        std::to_string(dep));
    }

    void reduce() {
        if (n_ <= 1) return;
        size_t k = 1;
        long guard = 0;
        while (k < n_) {
            if (++guard > 100'000'000) throw std::logic_error("lll: iteration guard exceeded");
            size_reduce(k, k - 1);
            // Lovasz test: d[k+1] d[k-1] >= delta d[k]^2 - lambda^2
            const Int& lam = gso_.lambda[k][k - 1];
            if (dq_ * (gso_.d[k + 1] * gso_.d[k - 1] + lam * lam) < dp_ * gso_.d[k] * gso_.d[k]) {
                swap_step(k);
                k = k > 1 ? k - 1 : 1;
            } else {
                for (size_t l = k - 1; l-- > 0;) size_reduce(k, l);
                ++k;
            }
        }
    }

    // Deep insertion pass: move b_k in front of the first position i where it
    // would shorten the projected vector by factor delta, then re-run plain LLL.
    void deep_pass() {
        long guard = 0;
        bool changed = true;
        while (changed) {
            if (++guard > 1'000'000) throw std::logic_error("lll deep: iteration guard exceeded");
            changed = false;
            auto [bstar_sq, mu] = rational_gso();
            for (size_t k = 1; k < n_ && !changed; ++k) {
                Rat c = 0;
                for (size_t row = 0; row < b_.rows; ++row) c += Rat(b_.at(row, k) * b_.at(row, k));
                for (size_t i = 0; i < k; ++i) {
                    if (c < delta_ * bstar_sq[i]) {
                        deep_insert(i, k);
                        reduce_from_scratch();
                        changed = true;
                        break;
                    }
                    c -= mu[k][i] * mu[k][i] * bstar_sq[i];
                }
            }
        }
    }

    ReducedBasis finish(IntMat original) {
        ReducedBasis rb;
        rb.reduced = b_;
        rb.transform = u_;
        rb.delta = delta_;
        rb.original = std::move(original);
        if (mul(rb.original, rb.transform) != rb.reduced)
            throw std::logic_error("lll: transform check B*U != B~ failed");
        Int dt = det(rb.transform);
        if (dt != 1 && dt != -1) throw std::logic_error("lll: transform not unimodular");
        return rb;
    }

private:
    IntMat b_, u_;
    size_t n_;
    Rat delta_;
    Int dp_, dq_;
    IntGso gso_;

    void reduce_from_scratch() {
        long dep = gso_.compute(b_);
        if (dep >= 0) throw std::logic_error("lll: dependency introduced");
        // plain LLL from the start; cheap at these sizes
        size_t k = 1;
        long guard = 0;
        while (k < n_) {
            if (++guard > 100'000'000) throw std::logic_error("lll: iteration guard exceeded");
            size_reduce(k, k - 1);
            const Int& lam = gso_.lambda[k][k - 1];
            if (dq_ * (gso_.d[k + 1] * gso_.d[k - 1] + lam * lam) < dp_ * gso_.d[k] * gso_.d[k]) {
                swap_step(k);
                k = k > 1 ? k - 1 : 1;
            } else {
                for (size_t l = k - 1; l-- > 0;) size_reduce(k, l);
                ++k;
            }
        }
    }

    void size_reduce(size_t k, size_t l) {
        const Int& lam = gso_.lambda[k][l];
        const Int& dl = gso_.d[l + 1];
        Int two_lam = 2 * lam;
        if (two_lam > dl || two_lam < -dl) {
            // q = nearest integer to lambda / d
            Int q = (2 * lam + dl) / (2 * dl);
            if ((2 * lam + dl) < 0 && (2 * lam + dl) % (2 * dl) != 0) --q;  // floor division
            for (size_t row = 0; row < b_.rows; ++row) b_.at(row, k) -= q * b_.at(row, l);
            for (size_t row = 0; row < n_; ++row) u_.at(row, k) -= q * u_.at(row, l);
            gso_.lambda[k][l] -= q * dl;
            for (size_t i = 0; i < l; ++i) gso_.lambda[k][i] -= q * gso_.lambda[l][i];
        }
    }

    void swap_step(size_t k) {
        b_.swap_cols(k, k - 1);
        u_.swap_cols(k, k - 1);
        for (size_t j = 0; j + 1 < k; ++j) std::swap(gso_.lambda[k][j], gso_.lambda[k - 1][j]);
        Int lam = gso_.lambda[k][k - 1];
        Int bnew = (gso_.d[k - 1] * gso_.d[k + 1] + lam * lam) / gso_.d[k];
        for (size_t i = k + 1; i < n_; ++i) {
            Int t = gso_.lambda[i][k];
            gso_.lambda[i][k] = (gso_.d[k + 1] * gso_.lambda[i][k - 1] - lam * t) / gso_.d[k];
            gso_.lambda[i][k - 1] = (bnew * t + lam * gso_.lambda[i][k]) / gso_.d[k + 1];
        }
        gso_.d[k] = bnew;
    }

    std::pair<std::vector<Rat>, std::vector<std::vector<Rat>>> rational_gso() const {
        std::vector<Rat> bs(n_);
        std::vector<std::vector<Rat>> mu(n_, std::vector<Rat>(n_, Rat(0)));
        for (size_t i = 0; i < n_; ++i) {
            bs[i] = Rat(gso_.d[i + 1]) / Rat(gso_.d[i]);
            for (size_t j = 0; j < i; ++j) mu[i][j] = Rat(gso_.lambda[i][j]) / Rat(gso_.d[j + 1]);
        }
        return {bs, mu};
    }

    void deep_insert(size_t i, size_t k) {
        // move column k to position i, shifting i..k-1 right
        for (size_t c = k; c > i; --c) {
            b_.swap_cols(c, c - 1);
            u_.swap_cols(c, c - 1);
        }
    }
};

}  // namespace detail

// LLL reduction of the column lattice of B with unimodular transform tracking.
// Gram-Schmidt bookkeeping is exact (integer lambda/d arrays). Optional deep
// insertion pass strengthens the reduction beyond plain LLL.
inline ReducedBasis lll_reduce(const IntMat& b, const Rat& delta = Rat(99, 100), bool deep = false) {
    if (b.cols == 0 || b.rows == 0) throw std::invalid_argument("lll_reduce: empty matrix");
    if (!(delta > Rat(1, 4) && delta < 1))
        throw std::invalid_argument("lll_reduce: delta must lie in (1/4, 1)");
    detail::LllReducer red(b, delta);
    red.reduce();
    if (deep) red.deep_pass();
    return red.finish(b);
}

// Test-side predicates for reduced bases, computed from an independent rational
// Gram-Schmidt pass over the reduced matrix.
inline bool is_lll_reduced(const IntMat& b, const Rat& delta) {
    size_t n = b.cols;
    std::vector<std::vector<Rat>> bstar(n, std::vector<Rat>(b.rows));
    std::vector<std::vector<Rat>> mu(n, std::vector<Rat>(n, Rat(0)));
    std::vector<Rat> norm_sq(n);
    for (size_t i = 0; i < n; ++i) {
        for (size_t row = 0; row < b.rows; ++row) bstar[i][row] = Rat(b.at(row, i));
        for (size_t j = 0; j < i; ++j) {
            Rat num_ = 0;
            for (size_t row = 0; row < b.rows; ++row) num_ += Rat(b.at(row, i)) * bstar[j][row];
            if (norm_sq[j] == 0) return false;
            mu[i][j] = num_ / norm_sq[j];
            for (size_t row = 0; row < b.rows; ++row) bstar[i][row] -= mu[i][j] * bstar[j][row];
        }
        norm_sq[i] = 0;
        for (size_t row = 0; row < b.rows; ++row) norm_sq[i] += bstar[i][row] * bstar[i][row];
    }
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < i; ++j) {
            Rat m = mu[i][j] < 0 ? Rat(-mu[i][j]) : mu[i][j];
            if (m > Rat(1, 2)) return false;
        }
    for (size_t k = 1; k < n; ++k)
        if (norm_sq[k] < (delta - mu[k][k - 1] * mu[k][k - 1]) * norm_sq[k - 1]) return false;
    return true;
}

}  // namespace ckp
