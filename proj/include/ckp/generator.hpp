#pragma once

#include "ckp/bnb.hpp"
#include "ckp/instance.hpp"
#include "ckp/linalg.hpp"
#include "ckp/simplex.hpp"
#include "ckp/width.hpp"

#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace ckp {

enum class GenFail {
    LevelBranchEmpty,   // the equality branch used for the next k-choice is LP-empty
    SideSystemEmpty,    // one side of a level split has no LP point
    MultiplierGap,      // iceil(eta) - ifloor(mu) < 1 at the innermost level
    BetaWindow,         // no integer window between eta' and mu'
};

inline const char* to_string(GenFail f) {
    switch (f) {
        case GenFail::LevelBranchEmpty: return "level-branch-empty";
        case GenFail::SideSystemEmpty: return "side-system-empty";
        case GenFail::MultiplierGap: return "multiplier-gap";
        case GenFail::BetaWindow: return "beta-window";
    }
    return "?";
}

struct GenFailure {
    GenFail kind;
    int level = 0;  // 1-based level the failure occurred at
};

using GenResult = std::variant<KnapsackInstance, GenFailure>;

namespace detail {

inline LinearSystem boxed_with_eqs(int n, const std::vector<IntVec>& ps, const std::vector<Int>& ks,
                                   int upto) {
    LinearSystem sys(n);
    for (int j = 0; j < upto; ++j)
        sys.add_eq(ps[static_cast<size_t>(j)], Rat(ks[static_cast<size_t>(j)] + 1));
    return sys;
}

}  // namespace detail

// k_i = round((ifloor(gamma_i) + iceil(delta_i)) / 2) with gamma/delta the range
// of p_i x under the outer equality branches p_j x = k_j + 1, j < i.
struct LevelRanges {
    std::vector<Int> k;
    std::vector<Rat> gamma, delta;
};

inline std::variant<LevelRanges, GenFailure> choose_branch_levels(const std::vector<IntVec>& ps) {
    int n = static_cast<int>(ps[0].size());
    LevelRanges out;
    for (size_t i = 0; i < ps.size(); ++i) {
        LinearSystem sys = detail::boxed_with_eqs(n, ps, out.k, static_cast<int>(i));
        auto w = width_along(ps[i], sys);
        if (!w) return GenFailure{GenFail::LevelBranchEmpty, static_cast<int>(i) + 1};
        out.gamma.push_back(w->max);
        out.delta.push_back(w->min);
        out.k.push_back(round_half_down(Rat(ifloor(w->max) + iceil(w->min), 2)));
    }
    return out;
}

// Two-level front end.
inline std::variant<std::pair<Int, Int>, GenFailure> choose_ks(const IntVec& p1, const IntVec& p2) {
    CascadeStructure s;
    s.p = {p1, p2};
    s.r = IntVec(p1.size(), Int(0));
    validate_structure(s);
    auto r = choose_branch_levels({p1, p2});
    if (auto* f = std::get_if<GenFailure>(&r)) return *f;
    auto& lv = std::get<LevelRanges>(r);
    return std::make_pair(lv.k[0], lv.k[1]);
}

struct InnerChoice {
    Int M;
    IntVec a_inner;  // p_t * M + r
    Int beta_lo, beta_hi;
    Rat eta, mu, eta_prime, mu_prime;
};

// Innermost level: split p_t x at k_t under all outer equality branches, choose the
// multiplier closing the r-gap and the integer window between the two sides.
inline std::variant<InnerChoice, GenFailure> choose_innermost(const std::vector<IntVec>& ps,
                                                              const IntVec& r,
                                                              const std::vector<Int>& ks) {
    int n = static_cast<int>(ps[0].size());
    int t = static_cast<int>(ps.size());
    LinearSystem left = detail::boxed_with_eqs(n, ps, ks, t - 1);
    LinearSystem right = left;
    left.add_le(ps[static_cast<size_t>(t - 1)], Rat(ks[static_cast<size_t>(t - 1)]));
    right.add_ge(ps[static_cast<size_t>(t - 1)], Rat(ks[static_cast<size_t>(t - 1)] + 1));
    OptResult eta = lp_optimize(r, Sense::Max, left);
    OptResult mu = lp_optimize(r, Sense::Min, right);
    if (eta.status != LpStatus::Optimal || mu.status != LpStatus::Optimal)
        return GenFailure{GenFail::SideSystemEmpty, t};
    InnerChoice c;
    c.eta = eta.value;
    c.mu = mu.value;
    c.M = iceil(eta.value) - ifloor(mu.value);
    if (c.M < 1) return GenFailure{GenFail::MultiplierGap, t};
    c.a_inner.resize(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j)
        c.a_inner[static_cast<size_t>(j)] =
            ps[static_cast<size_t>(t - 1)][static_cast<size_t>(j)] * c.M + r[static_cast<size_t>(j)];
    OptResult ep = lp_optimize(c.a_inner, Sense::Max, left);
    OptResult mp = lp_optimize(c.a_inner, Sense::Min, right);
    c.eta_prime = ep.value;
    c.mu_prime = mp.value;
    c.beta_lo = iceil(ep.value);
    c.beta_hi = ifloor(mp.value);
    if (c.beta_lo > c.beta_hi) return GenFailure{GenFail::BetaWindow, t};
    return c;
}

// Two-level front end with explicit k values.
inline std::variant<InnerChoice, GenFailure> choose_level2(const IntVec& p1, const IntVec& p2,
                                                           const IntVec& r, const Int& k1,
                                                           const Int& k2) {
    return choose_innermost({p1, p2}, r, {k1, k2});
}

// Internal hook: the integer-window step with an explicit multiplier. The window
// cannot fail when the multiplier comes from choose_innermost, so the failure
// path is only reachable through this entry.
inline std::variant<InnerChoice, GenFailure> inner_window_with_multiplier(
    const std::vector<IntVec>& ps, const IntVec& r, const std::vector<Int>& ks, const Int& m_forced) {
    int n = static_cast<int>(ps[0].size());
    int t = static_cast<int>(ps.size());
    LinearSystem left = detail::boxed_with_eqs(n, ps, ks, t - 1);
    LinearSystem right = left;
    left.add_le(ps[static_cast<size_t>(t - 1)], Rat(ks[static_cast<size_t>(t - 1)]));
    right.add_ge(ps[static_cast<size_t>(t - 1)], Rat(ks[static_cast<size_t>(t - 1)] + 1));
    InnerChoice c;
    c.M = m_forced;
    c.a_inner.resize(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j)
        c.a_inner[static_cast<size_t>(j)] =
            ps[static_cast<size_t>(t - 1)][static_cast<size_t>(j)] * c.M + r[static_cast<size_t>(j)];
    OptResult ep = lp_optimize(c.a_inner, Sense::Max, left);
    OptResult mp = lp_optimize(c.a_inner, Sense::Min, right);
    if (ep.status != LpStatus::Optimal || mp.status != LpStatus::Optimal)
        return GenFailure{GenFail::SideSystemEmpty, t};
    c.eta_prime = ep.value;
    c.mu_prime = mp.value;
    c.beta_lo = iceil(ep.value);
    c.beta_hi = ifloor(mp.value);
    if (c.beta_lo > c.beta_hi) return GenFailure{GenFail::BetaWindow, t};
    return c;
}

struct WrapChoice {
    Int M;
    IntVec a;  // p_i * M + a_inner
    Int beta_lo, beta_hi;
    Rat eta, mu;
};

// Wrap level i (1-based) around an already-built inner aggregate: pin the window
// against points with p_i x <= k_i and p_i x >= k_i + w + 1, under the outer
// equality branches of levels < i.
inline std::variant<WrapChoice, GenFailure> wrap_level(const std::vector<IntVec>& ps, int level,
                                                       const IntVec& a_inner,
                                                       const std::vector<Int>& ks,
                                                       const Int& m_inner, const Int& beta_lo,
                                                       const Int& beta_hi, int width_target) {
    int n = static_cast<int>(ps[0].size());
    const IntVec& pi = ps[static_cast<size_t>(level - 1)];
    LinearSystem low = detail::boxed_with_eqs(n, ps, ks, level - 1);
    LinearSystem high = low;
    low.add_le(pi, Rat(ks[static_cast<size_t>(level - 1)]));
    high.add_ge(pi, Rat(ks[static_cast<size_t>(level - 1)] + 1 + width_target));
    OptResult eta = lp_optimize(a_inner, Sense::Max, low);
    OptResult mu = lp_optimize(a_inner, Sense::Min, high);
    if (eta.status != LpStatus::Optimal || mu.status != LpStatus::Optimal)
        return GenFailure{GenFail::SideSystemEmpty, level};
    WrapChoice c;
    c.eta = eta.value;
    c.mu = mu.value;
    Rat need = eta.value - Rat(beta_lo);
    if (Rat(beta_hi) - mu.value > need) need = Rat(beta_hi) - mu.value;
    if (Rat(m_inner) > need) need = Rat(m_inner);
    c.M = iceil(need);
    c.a.resize(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j)
        c.a[static_cast<size_t>(j)] = pi[static_cast<size_t>(j)] * c.M + a_inner[static_cast<size_t>(j)];
    Int shift = (ks[static_cast<size_t>(level - 1)] + 1) * c.M;
    c.beta_lo = beta_lo + shift;
    c.beta_hi = beta_hi + shift;
    return c;
}

// Two-level front end (level 1 wrap).
inline std::variant<WrapChoice, GenFailure> choose_level1(const IntVec& p1, const IntVec& a2,
                                                          const Int& k1, const Int& m2,
                                                          const Int& beta2_lo, const Int& beta2_hi,
                                                          int width_target = 1) {
    return wrap_level({p1}, 1, a2, {k1}, m2, beta2_lo, beta2_hi, width_target);
}

// Full construction for t >= 1 cascade vectors. targets[i] is the intended
// integer width of level i+1 (outer levels only; the innermost level always
// aims for an empty interval). The innermost level is built first against r,
// then each outer level wraps the inner aggregate as its residual vector.
inline GenResult generate_with_vectors(const std::vector<IntVec>& ps, const IntVec& r,
                                       std::vector<int> targets) {
    int t = static_cast<int>(ps.size());
    CascadeStructure s;
    s.p = ps;
    s.r = r;
    if (targets.empty()) targets.assign(static_cast<size_t>(t > 0 ? t - 1 : 0), 1);
    if (static_cast<int>(targets.size()) != t - 1)
        throw std::invalid_argument("generate: need one width target per outer level");
    for (int w : targets)
        if (w < 1) throw std::invalid_argument("generate: width targets must be >= 1");
    s.targets = targets;
    validate_structure(s);

    auto levels = choose_branch_levels(ps);
    if (auto* f = std::get_if<GenFailure>(&levels)) return *f;
    LevelRanges& lv = std::get<LevelRanges>(levels);

    auto inner = choose_innermost(ps, r, lv.k);
    if (auto* f = std::get_if<GenFailure>(&inner)) return *f;
    InnerChoice& ic = std::get<InnerChoice>(inner);

    GeneratorTrace trace;
    trace.levels.resize(static_cast<size_t>(t));
    {
        LevelTrace& tl = trace.levels[static_cast<size_t>(t - 1)];
        tl.gamma = lv.gamma[static_cast<size_t>(t - 1)];
        tl.delta = lv.delta[static_cast<size_t>(t - 1)];
        tl.k = lv.k[static_cast<size_t>(t - 1)];
        tl.eta = ic.eta;
        tl.mu = ic.mu;
        tl.eta_prime = ic.eta_prime;
        tl.mu_prime = ic.mu_prime;
        tl.M = ic.M;
        tl.beta_lo = ic.beta_lo;
        tl.beta_hi = ic.beta_hi;
    }

    IntVec a_cur = ic.a_inner;
    Int m_cur = ic.M, blo = ic.beta_lo, bhi = ic.beta_hi;
    std::vector<Int> ms(static_cast<size_t>(t));
    ms[static_cast<size_t>(t - 1)] = ic.M;
    for (int level = t - 1; level >= 1; --level) {
        auto wrap = wrap_level(ps, level, a_cur, lv.k, m_cur, blo, bhi,
                               targets[static_cast<size_t>(level - 1)]);
        if (auto* f = std::get_if<GenFailure>(&wrap)) return *f;
        WrapChoice& wc = std::get<WrapChoice>(wrap);
        LevelTrace& tl = trace.levels[static_cast<size_t>(level - 1)];
        tl.gamma = lv.gamma[static_cast<size_t>(level - 1)];
        tl.delta = lv.delta[static_cast<size_t>(level - 1)];
        tl.k = lv.k[static_cast<size_t>(level - 1)];
        tl.eta = wc.eta;
        tl.mu = wc.mu;
        tl.M = wc.M;
        tl.beta_lo = wc.beta_lo;
        tl.beta_hi = wc.beta_hi;
        a_cur = wc.a;
        m_cur = wc.M;
        blo = wc.beta_lo;
        bhi = wc.beta_hi;
        ms[static_cast<size_t>(level - 1)] = wc.M;
    }

    s.M = ms;
    s.k = lv.k;
    KnapsackInstance inst;
    inst.n = static_cast<int>(ps[0].size());
    inst.a = a_cur;
    inst.beta_lo = blo;
    inst.beta_hi = bhi;
    inst.provenance = Provenance{s, trace};
    return inst;
}

// Two-level entry point.
inline GenResult generate_ckp(const IntVec& p1, const IntVec& p2, const IntVec& r,
                              int width_target = 1) {
    return generate_with_vectors({p1, p2}, r, {width_target});
}

// ---- seeded sampling (the random protocol) ----

// Deterministic source: std::mt19937_64 (sequence pinned by the C++ standard),
// bounded draws by modulo. Identical seeds reproduce identical instances on
// every platform.
struct SeededRng {
    std::mt19937_64 eng;
    explicit SeededRng(uint64_t seed) : eng(seed) {}
    long draw(long lo, long hi) {
        return lo + static_cast<long>(eng() % static_cast<uint64_t>(hi - lo + 1));
    }
};

struct CascadeOptions {
    int attempt_budget = 200;
    BnbLimits cert_limits{20'000, 200'000};
};

struct CascadeSuccess {
    KnapsackInstance instance;
    int attempts_used = 0;
};

struct CascadeFailure {
    std::map<std::string, int> histogram;
    int attempts = 0;
};

using CascadeResult = std::variant<CascadeSuccess, CascadeFailure>;

namespace detail {

// Entries of every p_i from {1,2,3} and of r from {-1,0,1}; per-coordinate
// tuples are kept distinct so the final coefficients can come out pairwise
// different, and p-vector pairs agreeing in all but <3 coordinates are
// rejected as too close.
inline bool sample_structure(int n, int t, SeededRng& rng, std::vector<IntVec>& ps, IntVec& r,
                             std::string& fail) {
    std::set<std::vector<long>> seen;
    std::vector<std::vector<long>> tuples;
    for (int j = 0; j < n; ++j) {
        bool ok = false;
        for (int tries = 0; tries < 200 && !ok; ++tries) {
            std::vector<long> tup(static_cast<size_t>(t) + 1);
            for (int i = 0; i < t; ++i) tup[static_cast<size_t>(i)] = rng.draw(1, 3);
            tup[static_cast<size_t>(t)] = rng.draw(-1, 1);
            if (seen.insert(tup).second) {
                tuples.push_back(std::move(tup));
                ok = true;
            }
        }
        if (!ok) {
            fail = "tuple-space-exhausted";
            return false;
        }
    }
    ps.assign(static_cast<size_t>(t), IntVec(static_cast<size_t>(n)));
    r.assign(static_cast<size_t>(n), Int(0));
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < t; ++i)
            ps[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                tuples[static_cast<size_t>(j)][static_cast<size_t>(i)];
        r[static_cast<size_t>(j)] = tuples[static_cast<size_t>(j)][static_cast<size_t>(t)];
    }
    for (int i = 0; i < t; ++i)
        for (int j2 = i + 1; j2 < t; ++j2) {
            int diff = 0;
            for (int x = 0; x < n; ++x)
                diff += ps[static_cast<size_t>(i)][static_cast<size_t>(x)] !=
                        ps[static_cast<size_t>(j2)][static_cast<size_t>(x)];
            if (diff < 3) {
                fail = "too-close";
                return false;
            }
        }
    IntMat pm(static_cast<size_t>(t), static_cast<size_t>(n));
    for (int i = 0; i < t; ++i)
        for (int j = 0; j < n; ++j)
            pm.at(static_cast<size_t>(i), static_cast<size_t>(j)) =
                ps[static_cast<size_t>(i)][static_cast<size_t>(j)];
    if (rank(pm) != static_cast<size_t>(t)) {
        fail = "rank-deficient";
        return false;
    }
    return true;
}

// Target verification on the finished instance: exact integer widths along each
// p_i under the outer equality branches, empty innermost interval, and a pure
// hyperplane-cascade infeasibility proof.
inline bool verify_targets(const KnapsackInstance& inst, const CascadeOptions& opts,
                           std::string& fail) {
    const CascadeStructure& s = inst.provenance->structure;
    int t = s.t();
    for (int i = 0; i < t; ++i) {
        LinearSystem sys = relaxation(inst);
        for (int j = 0; j < i; ++j)
            sys.add_eq(s.p[static_cast<size_t>(j)], Rat(s.k[static_cast<size_t>(j)] + 1));
        auto iw = iwidth_along(s.p[static_cast<size_t>(i)], sys);
        Int want = i < t - 1 ? Int(s.targets[static_cast<size_t>(i)]) : Int(0);
        if (!iw || *iw != want) {
            fail = "iwidth-miss";
            return false;
        }
    }
    std::vector<IntVec> dirs(s.p.begin(), s.p.end());
    if (!cascade_proves_infeasible(inst, dirs, opts.cert_limits)) {
        fail = "not-cascade-certified";
        return false;
    }
    return true;
}

}  // namespace detail

// Random cascade generation: sample vectors, run the construction, accept only
// instances that hit every width target and whose integer infeasibility is
// proven by the hyperplane cascade alone. Retries with fresh samples up to the
// attempt budget and reports the failure histogram when exhausted.
inline CascadeResult generate_cascade(int n, int t, uint64_t seed, std::vector<int> targets = {},
                                      const CascadeOptions& opts = {}) {
    if (t < 2 || t > 3) throw std::invalid_argument("generate_cascade: t must be 2 or 3");
    if (n < 2 * t) throw std::invalid_argument("generate_cascade: n >= 2t required");
    if (targets.empty()) targets.assign(static_cast<size_t>(t - 1), 1);
    SeededRng rng(seed);
    CascadeFailure failure;
    for (int attempt = 1; attempt <= opts.attempt_budget; ++attempt) {
        failure.attempts = attempt;
        std::vector<IntVec> ps;
        IntVec r;
        std::string why;
        if (!detail::sample_structure(n, t, rng, ps, r, why)) {
            failure.histogram[why] += 1;
            continue;
        }
        GenResult g = generate_with_vectors(ps, r, targets);
        if (auto* f = std::get_if<GenFailure>(&g)) {
            failure.histogram[to_string(f->kind)] += 1;
            continue;
        }
        KnapsackInstance inst = std::get<KnapsackInstance>(std::move(g));
        {
            std::set<Int> uniq(inst.a.begin(), inst.a.end());
            if (uniq.size() != inst.a.size()) {
                failure.histogram["duplicate-coefficients"] += 1;
                continue;
            }
        }
        if (!detail::verify_targets(inst, opts, why)) {
            failure.histogram[why] += 1;
            continue;
        }
        return CascadeSuccess{std::move(inst), attempt};
    }
    return failure;
}

}  // namespace ckp
