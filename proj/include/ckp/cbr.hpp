#pragma once

#include "ckp/instance.hpp"
#include "ckp/kernel.hpp"
#include "ckp/linalg.hpp"
#include "ckp/lll.hpp"
#include "ckp/minima.hpp"

#include <optional>
#include <stdexcept>
#include <vector>

namespace ckp {

// A = [a; I], the knapsack row stacked over the identity.
inline IntMat build_stacked(const KnapsackInstance& inst) {
    size_t n = static_cast<size_t>(inst.n);
    IntMat a(n + 1, n);
    for (size_t j = 0; j < n; ++j) {
        a.at(0, j) = inst.a[j];
        a.at(j + 1, j) = 1;
    }
    return a;
}

// { x | b' <= A x <= b } rewritten as { y | b' <= A U y <= b } with unimodular U.
struct ReformulatedInstance {
    KnapsackInstance base;
    IntMat transform;      // U
    IntMat transform_inv;  // U^{-1}, exact integer
    IntMat reform_rows;    // A U, (n+1) x n
    Rat delta;
    std::vector<Int> col_norms_before;  // squared
    std::vector<Int> col_norms_after;   // squared
};

inline ReformulatedInstance reformulate(const KnapsackInstance& inst, const Rat& delta = Rat(99, 100),
                                        bool deep = false) {
    IntMat a = build_stacked(inst);
    ReducedBasis red = lll_reduce(a, delta, deep);
    ReformulatedInstance out;
    out.base = inst;
    out.transform = red.transform;
    out.transform_inv = inverse_unimodular(red.transform);
    out.reform_rows = red.reduced;
    out.delta = delta;
    for (size_t j = 0; j < a.cols; ++j) {
        out.col_norms_before.push_back(col_norm_sq(a, j));
        out.col_norms_after.push_back(col_norm_sq(red.reduced, j));
    }
    return out;
}

// x = U y.
inline IntVec pullback(const IntVec& y, const ReformulatedInstance& reform) {
    if (y.size() != reform.transform.cols) throw std::invalid_argument("pullback: length mismatch");
    return mul(reform.transform, y);
}

// y = U^{-1} x.
inline IntVec push_forward(const IntVec& x, const ReformulatedInstance& reform) {
    if (x.size() != reform.transform_inv.cols)
        throw std::invalid_argument("push_forward: length mismatch");
    return mul(reform.transform_inv, x);
}

// The y-space feasibility system: first row a U y in [beta_lo, beta_hi], then
// (U y)_i in [0, 1] per original variable. The y box is the exact image of the
// unit box under U^{-1} (implied bounds, kept finite for branching).
inline LinearSystem reform_system(const ReformulatedInstance& reform) {
    int n = reform.base.n;
    LinearSystem sys(n);
    sys.add_row(reform.reform_rows.row(0), Bound::at_int(reform.base.beta_lo),
                Bound::at_int(reform.base.beta_hi));
    for (int i = 1; i <= n; ++i)
        sys.add_row(reform.reform_rows.row(static_cast<size_t>(i)), Bound::at(0), Bound::at(1));
    for (int j = 0; j < n; ++j) {
        Int lo = 0, hi = 0;
        for (int i = 0; i < n; ++i) {
            const Int& u = reform.transform_inv.at(static_cast<size_t>(j), static_cast<size_t>(i));
            if (u > 0) hi += u;
            else lo += u;
        }
        sys.set_box(j, Bound::at_int(lo), Bound::at_int(hi));
    }
    return sys;
}

// Zero-prefix profile of P~ = P U: per row the maximal leading block of zeros,
// and whether the prefixes are nested (outer rows at least as long).
struct ZeroBlockProfile {
    std::vector<int> achieved;
    bool nested = true;
    IntMat p_tilde;
};

inline ZeroBlockProfile zero_block_profile(const CascadeStructure& s, const IntMat& u) {
    IntMat p(static_cast<size_t>(s.t()), static_cast<size_t>(s.n()));
    for (int i = 0; i < s.t(); ++i)
        for (int j = 0; j < s.n(); ++j)
            p.at(static_cast<size_t>(i), static_cast<size_t>(j)) =
                s.p[static_cast<size_t>(i)][static_cast<size_t>(j)];
    ZeroBlockProfile prof;
    prof.p_tilde = mul(p, u);
    for (size_t i = 0; i < prof.p_tilde.rows; ++i) {
        int z = 0;
        while (static_cast<size_t>(z) < prof.p_tilde.cols &&
               prof.p_tilde.at(i, static_cast<size_t>(z)) == 0)
            ++z;
        prof.achieved.push_back(z);
    }
    for (size_t i = 0; i + 1 < prof.achieved.size(); ++i)
        prof.nested &= prof.achieved[i] >= prof.achieved[i + 1];
    return prof;
}

// Lower bounds f_i = c_n * alpha_{s_i} * rho^2 * (M_{i+1} + ... + M_t + 1) such
// that multipliers above them force the requested zero prefixes. Computed
// back-to-front with M_i = f_i + 1 feeding the next bound; every irrational
// quantity is replaced by an integer upper bound, which keeps the thresholds
// conservative.
struct MThresholds {
    std::vector<Int> f;            // per level, 1-based order (f[0] for level 1)
    std::vector<Int> suggested_m;  // f_i + 1, strictly decreasing by construction
    Int c_n;
    Int rho_sq_bound;
};

inline MThresholds m_thresholds(const IntMat& p, const IntVec& r, const std::vector<int>& s,
                                std::optional<std::vector<Int>> alpha_sq = std::nullopt,
                                std::optional<Int> c_n = std::nullopt) {
    size_t t = p.rows, n = p.cols;
    if (s.size() != t) throw std::invalid_argument("m_thresholds: s length mismatch");
    for (size_t i = 0; i + 1 < t; ++i)
        if (s[i] < s[i + 1]) throw std::invalid_argument("m_thresholds: s must be non-increasing");
    if (s[t - 1] < 1 || static_cast<size_t>(s[0]) > n - t)
        throw std::invalid_argument("m_thresholds: s out of range [1, n-t]");
    if (!alpha_sq) {
        if (n > 5)
            throw std::invalid_argument(
                "m_thresholds: refused, n > 5 without a supplied alpha surrogate");
        IntMat kern = kernel_basis(p);
        LatticeMinima mins = successive_minima(kern, s[0]);
        alpha_sq = mins.values;
    }
    MThresholds out;
    out.c_n = c_n ? *c_n : isqrt_ceil(pow2_int(static_cast<unsigned>(n - 1)));
    // rho = max(|p_1|, ..., |p_t|, |r| + 1); bound rho^2 from above exactly.
    Int rho_sq = 0;
    for (size_t i = 0; i < t; ++i) {
        Int ns = 0;
        for (size_t j = 0; j < n; ++j) ns += p.at(i, j) * p.at(i, j);
        if (ns > rho_sq) rho_sq = ns;
    }
    {
        Int rn = isqrt_ceil(norm_sq(r)) + 1;
        if (rn * rn > rho_sq) rho_sq = rn * rn;
    }
    out.rho_sq_bound = rho_sq;
    out.f.assign(t, Int(0));
    out.suggested_m.assign(t, Int(0));
    Int inner_sum = 0;  // M_{i+1} + ... + M_t
    for (size_t i = t; i-- > 0;) {
        Int alpha_ub = isqrt_ceil((*alpha_sq)[static_cast<size_t>(s[i] - 1)]);
        out.f[i] = out.c_n * alpha_ub * rho_sq * (inner_sum + 1);
        out.suggested_m[i] = out.f[i] + 1;
        inner_sum += out.suggested_m[i];
    }
    return out;
}

}  // namespace ckp
