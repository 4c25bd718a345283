#pragma once

#include "ckp/linear_system.hpp"

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace ckp {

enum class LpStatus { Optimal, Infeasible, Unbounded };
enum class Sense { Max, Min };

struct OptResult {
    LpStatus status = LpStatus::Infeasible;
    Rat value;
    RatVec witness;  // length n when Optimal
};

namespace detail {

// Two-phase bounded-variable primal simplex over exact rationals, Bland's rule.
// Columns: [0, n) structural, [n, n+m) row slacks, [n+m, n+2m) phase-1 artificials.
class SimplexSolver {
public:
    SimplexSolver(const IntVec& objective, const LinearSystem& sys)
        : n_(static_cast<size_t>(sys.n)), m_(sys.rows.size()), sys_(sys) {
        ncol_ = n_ + 2 * m_;
        lo_.resize(ncol_);
        hi_.resize(ncol_);
        for (size_t j = 0; j < n_; ++j) {
            lo_[j] = sys.box[j].first;
            hi_[j] = sys.box[j].second;
        }
        for (size_t i = 0; i < m_; ++i) {
            lo_[n_ + i] = sys.rows[i].lo;
            hi_[n_ + i] = sys.rows[i].hi;
        }
        // Equality rows:  A x - s = 0
        tab_.assign(m_, RatVec(ncol_));
        for (size_t i = 0; i < m_; ++i) {
            for (size_t j = 0; j < n_; ++j) tab_[i][j] = Rat(sys.rows[i].coeffs[j]);
            tab_[i][n_ + i] = -1;
        }
        obj_.assign(ncol_, Rat(0));
        for (size_t j = 0; j < n_; ++j) obj_[j] = Rat(objective[j]);
    }

    OptResult solve() {
        init_nonbasic_values();
        install_artificials();
        // Phase 1: maximize -sum(artificials).
        RatVec c1(ncol_, Rat(0));
        for (size_t i = 0; i < m_; ++i) c1[n_ + m_ + i] = -1;
        load_objective(c1);
        run();
        Rat infeas = 0;
        for (size_t i = 0; i < m_; ++i) infeas += value_[n_ + m_ + i];
        if (infeas != 0) {
            verify_infeasibility_certificate();
            return OptResult{LpStatus::Infeasible, Rat(), {}};
        }
        // Pin artificials at zero and run phase 2.
        for (size_t i = 0; i < m_; ++i) hi_[n_ + m_ + i] = Bound::at(0);
        load_objective(obj_);
        bool bounded = run();
        if (!bounded) return OptResult{LpStatus::Unbounded, Rat(), {}};
        OptResult res;
        res.status = LpStatus::Optimal;
        res.witness.assign(value_.begin(), value_.begin() + static_cast<long>(n_));
        res.value = 0;
        for (size_t j = 0; j < n_; ++j) res.value += obj_[j] * res.witness[j];
        verify_witness(res);
        return res;
    }

private:
    enum class State { AtLower, AtUpper, Free, Basic };

    size_t n_, m_, ncol_;
    const LinearSystem& sys_;
    std::vector<RatVec> tab_;   // m x ncol, current basis representation of the equality rows
    RatVec dvec_;               // reduced costs, length ncol
    RatVec obj_;                // phase-2 objective over all columns
    std::vector<Bound> lo_, hi_;
    RatVec value_;              // current value of every column
    std::vector<State> state_;
    std::vector<size_t> basis_;  // basis_[i] = column basic in row i
    std::vector<int> sigma_;     // row orientation applied when installing artificials

    void init_nonbasic_values() {
        value_.assign(ncol_, Rat(0));
        state_.assign(ncol_, State::Free);
        for (size_t j = 0; j < n_ + m_; ++j) {
            if (lo_[j].finite()) {
                value_[j] = lo_[j].value;
                state_[j] = State::AtLower;
            } else if (hi_[j].finite()) {
                value_[j] = hi_[j].value;
                state_[j] = State::AtUpper;
            } else {
                value_[j] = 0;
                state_[j] = State::Free;
            }
        }
    }

    void install_artificials() {
        basis_.resize(m_);
        sigma_.assign(m_, 1);
        for (size_t i = 0; i < m_; ++i) {
            Rat resid = 0;
            for (size_t j = 0; j < n_ + m_; ++j)
                if (tab_[i][j] != 0) resid -= tab_[i][j] * value_[j];
            if (resid < 0) {
                sigma_[i] = -1;
                for (size_t j = 0; j < n_ + m_; ++j) tab_[i][j] = -tab_[i][j];
                resid = -resid;
            }
            size_t aj = n_ + m_ + i;
            tab_[i][aj] = 1;
            lo_[aj] = Bound::at(0);
            hi_[aj] = Bound::pos_inf();
            value_[aj] = resid;
            state_[aj] = State::Basic;
            basis_[i] = aj;
        }
    }

    // Compute reduced costs d = c - c_B^T tab for the given objective.
    void load_objective(const RatVec& c) {
        dvec_ = c;
        for (size_t i = 0; i < m_; ++i) {
            const Rat& cb = c[basis_[i]];
            if (cb == 0) continue;
            for (size_t j = 0; j < ncol_; ++j)
                if (tab_[i][j] != 0) dvec_[j] -= cb * tab_[i][j];
        }
    }

    // Returns false iff unbounded.
    bool run() {
        const long guard = 20'000'000;
        for (long iter = 0; iter < guard; ++iter) {
            size_t ent = ncol_;
            int dir = 0;
            for (size_t j = 0; j < ncol_; ++j) {
                if (state_[j] == State::Basic) continue;
                if (state_[j] == State::AtLower && dvec_[j] > 0) { ent = j; dir = 1; break; }
                if (state_[j] == State::AtUpper && dvec_[j] < 0) { ent = j; dir = -1; break; }
                if (state_[j] == State::Free && dvec_[j] != 0) {
                    ent = j;
                    dir = dvec_[j] > 0 ? 1 : -1;
                    break;
                }
            }
            if (ent == ncol_) return true;  // optimal

            // Ratio test: smallest step; ties broken by smallest leaving column index.
            bool have_t = false;
            Rat best_t;
            long leave = -1;  // -2 = entering reaches its own opposite bound
            bool leave_at_lower = false;
            if (dir == 1 && hi_[ent].finite()) {
                best_t = hi_[ent].value - value_[ent];
                have_t = true;
                leave = -2;
            } else if (dir == -1 && lo_[ent].finite()) {
                best_t = value_[ent] - lo_[ent].value;
                have_t = true;
                leave = -2;
            }
            for (size_t i = 0; i < m_; ++i) {
                const Rat& a = tab_[i][ent];
                if (a == 0) continue;
                // x_B[i] moves by -dir * a * t
                bool decreasing = (dir == 1) == (a > 0);
                size_t bi = basis_[i];
                Rat step_abs = a > 0 ? a : Rat(-a);
                if (decreasing) {
                    if (!lo_[bi].finite()) continue;
                    Rat t = (value_[bi] - lo_[bi].value) / step_abs;
                    if (!have_t || t < best_t ||
                        (t == best_t && leave >= 0 && bi < basis_[static_cast<size_t>(leave)])) {
                        best_t = t; have_t = true; leave = static_cast<long>(i); leave_at_lower = true;
                    }
                } else {
                    if (!hi_[bi].finite()) continue;
                    Rat t = (hi_[bi].value - value_[bi]) / step_abs;
                    if (!have_t || t < best_t ||
                        (t == best_t && leave >= 0 && bi < basis_[static_cast<size_t>(leave)])) {
                        best_t = t; have_t = true; leave = static_cast<long>(i); leave_at_lower = false;
                    }
                }
            }
            if (!have_t) return false;  // unbounded

            if (best_t != 0) {
                for (size_t i = 0; i < m_; ++i) {
                    if (tab_[i][ent] == 0) continue;
                    value_[basis_[i]] -= Rat(dir) * best_t * tab_[i][ent];
                }
                value_[ent] += Rat(dir) * best_t;
            }
            if (leave == -2) {
                state_[ent] = dir == 1 ? State::AtUpper : State::AtLower;
                continue;
            }
            pivot(static_cast<size_t>(leave), ent, leave_at_lower);
        }
        throw std::logic_error("simplex: iteration guard exceeded");
    }

    void pivot(size_t r, size_t ent, bool leaving_to_lower) {
        size_t lv = basis_[r];
        Rat piv = tab_[r][ent];
        for (size_t j = 0; j < ncol_; ++j)
            if (tab_[r][j] != 0) tab_[r][j] /= piv;
        for (size_t i = 0; i < m_; ++i) {
            if (i == r) continue;
            Rat f = tab_[i][ent];
            if (f == 0) continue;
            for (size_t j = 0; j < ncol_; ++j)
                if (tab_[r][j] != 0) tab_[i][j] -= f * tab_[r][j];
        }
        {
            Rat f = dvec_[ent];
            if (f != 0)
                for (size_t j = 0; j < ncol_; ++j)
                    if (tab_[r][j] != 0) dvec_[j] -= f * tab_[r][j];
        }
        basis_[r] = ent;
        state_[ent] = State::Basic;
        state_[lv] = leaving_to_lower ? State::AtLower : State::AtUpper;
    }

    // Farkas certificate from the phase-1 optimum: with q = y^T E over the
    // structural and slack columns, every feasible z has q.z = 0, while the
    // box infimum of q.z is strictly positive.
    void verify_infeasibility_certificate() const {
        RatVec q(n_ + m_, Rat(0));
        for (size_t i = 0; i < m_; ++i) {
            size_t aj = n_ + m_ + i;
            Rat y = Rat(-1) - dvec_[aj];  // orientation of the installed row
            if (y == 0) continue;
            Rat y_orig = y * sigma_[i];
            for (size_t j = 0; j < n_; ++j) q[j] += y_orig * Rat(sys_.rows[i].coeffs[j]);
            q[n_ + i] -= y_orig;
        }
        Rat inf = 0;
        for (size_t j = 0; j < n_ + m_; ++j) {
            if (q[j] > 0) {
                if (!lo_[j].finite()) throw std::logic_error("infeasibility certificate: unbounded term");
                inf += q[j] * lo_[j].value;
            } else if (q[j] < 0) {
                if (!hi_[j].finite()) throw std::logic_error("infeasibility certificate: unbounded term");
                inf += q[j] * hi_[j].value;
            }
        }
        if (inf <= 0) throw std::logic_error("infeasibility certificate failed verification");
    }

    void verify_witness(const OptResult& res) const {
        if (!sys_.contains(res.witness))
            throw std::logic_error("simplex: witness failed feasibility re-check");
    }
};

}  // namespace detail

// Exact LP optimum of an integer objective over a LinearSystem.
inline OptResult lp_optimize(const IntVec& objective, Sense sense, const LinearSystem& sys) {
    if (static_cast<int>(objective.size()) != sys.n)
        throw std::invalid_argument("lp_optimize: objective length mismatch");
    if (sense == Sense::Min) {
        IntVec neg(objective.size());
        for (size_t j = 0; j < objective.size(); ++j) neg[j] = -objective[j];
        OptResult r = lp_optimize(neg, Sense::Max, sys);
        if (r.status == LpStatus::Optimal) r.value = -r.value;
        return r;
    }
    detail::SimplexSolver solver(objective, sys);
    return solver.solve();
}

// Feasibility probe: any vertex of the system, or Infeasible.
inline OptResult lp_feasible_point(const LinearSystem& sys) {
    return lp_optimize(IntVec(static_cast<size_t>(sys.n), Int(0)), Sense::Max, sys);
}

}  // namespace ckp
