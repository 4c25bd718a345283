#pragma once

#include "ckp/linear_system.hpp"

#include <optional>
#include <stdexcept>
#include <vector>

namespace ckp {

// Cascade structure a = p_1 M_1 + ... + p_t M_t + r with branch levels k_i.
// targets[i] is the intended integer width along p_{i+1} for levels 1..t-1;
// all-ones is the plain exact-level construction.
struct CascadeStructure {
    std::vector<IntVec> p;
    IntVec r;
    std::vector<Int> M;
    std::vector<Int> k;
    std::vector<int> targets;

    int t() const { return static_cast<int>(p.size()); }
    int n() const { return p.empty() ? 0 : static_cast<int>(p[0].size()); }
};

inline bool proportional(const IntVec& a, const IntVec& b) {
    // a, b nonzero integer vectors; true iff a = c*b for rational c.
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = i + 1; j < a.size(); ++j)
            if (a[i] * b[j] != a[j] * b[i]) return false;
    return true;
}

inline void validate_structure(const CascadeStructure& s) {
    if (s.t() < 1) throw std::invalid_argument("structure: t >= 1 required");
    size_t n = s.p[0].size();
    for (const auto& pi : s.p) {
        if (pi.size() != n) throw std::invalid_argument("structure: p length mismatch");
        for (const Int& v : pi)
            if (v < 1) throw std::invalid_argument("structure: p entries must be >= 1");
    }
    if (s.r.size() != n) throw std::invalid_argument("structure: r length mismatch");
    for (int i = 0; i < s.t(); ++i)
        for (int j = i + 1; j < s.t(); ++j)
            if (proportional(s.p[static_cast<size_t>(i)], s.p[static_cast<size_t>(j)]))
                throw std::invalid_argument("structure: p vectors must be pairwise independent");
    if (!s.M.empty()) {
        if (static_cast<int>(s.M.size()) != s.t()) throw std::invalid_argument("structure: M length mismatch");
        for (size_t i = 0; i + 1 < s.M.size(); ++i)
            if (!(s.M[i] > s.M[i + 1]))
                throw std::invalid_argument("structure: multipliers must strictly decrease");
        for (const Int& m : s.M)
            if (m < 1) throw std::invalid_argument("structure: multipliers must be positive");
    }
}

// a = sum_i p_i M_i + r, componentwise.
inline IntVec evaluate_coefficients(const CascadeStructure& s) {
    if (s.t() < 1) throw std::invalid_argument("evaluate_coefficients: t >= 1 required");
    if (static_cast<int>(s.M.size()) != s.t())
        throw std::invalid_argument("evaluate_coefficients: M length mismatch");
    size_t n = s.p[0].size();
    if (s.r.size() != n) throw std::invalid_argument("evaluate_coefficients: r length mismatch");
    IntVec a(s.r);
    for (int i = 0; i < s.t(); ++i) {
        const IntVec& pi = s.p[static_cast<size_t>(i)];
        if (pi.size() != n) throw std::invalid_argument("evaluate_coefficients: p length mismatch");
        for (size_t j = 0; j < n; ++j) a[j] += pi[j] * s.M[static_cast<size_t>(i)];
    }
    return a;
}

// Per-level record of the LP optima seen while running the construction.
struct LevelTrace {
    Rat gamma, delta;  // range of p_i x when choosing k_i
    Int k;
    Rat eta, mu;
    std::optional<Rat> eta_prime, mu_prime;  // innermost level only
    Int M;
    Int beta_lo, beta_hi;  // window after wrapping this level
};

struct GeneratorTrace {
    std::vector<LevelTrace> levels;  // index 0 = outermost
};

struct Provenance {
    CascadeStructure structure;
    std::optional<GeneratorTrace> trace;
};

// Feasibility system { x in Z^n | beta_lo <= a.x <= beta_hi, 0 <= x <= 1 }.
struct KnapsackInstance {
    int n = 0;
    IntVec a;
    Int beta_lo, beta_hi;
    std::optional<Provenance> provenance;
};

inline LinearSystem relaxation(const KnapsackInstance& inst) {
    LinearSystem sys(inst.n);
    sys.add_row(inst.a, Bound::at_int(inst.beta_lo), Bound::at_int(inst.beta_hi));
    return sys;
}

}  // namespace ckp
