#pragma once

#include "ckp/instance.hpp"
#include "ckp/simplex.hpp"
#include "ckp/width.hpp"

#include <algorithm>
#include <cstdint>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace ckp {

struct UnitVariable {
    enum class Order { LastFirst, FirstFirst, MostFractional };
    Order order = Order::LastFirst;
};

struct HyperplaneSequence {
    std::vector<IntVec> directions;  // applied by depth, in order
    // When the sequence is exhausted at an LP-feasible fractional node, fall back
    // to unit-variable branching; with fallback off such nodes end Inconclusive.
    bool fall_back_to_variables = true;
    UnitVariable::Order fallback_order = UnitVariable::Order::LastFirst;
};

using BranchStrategy = std::variant<UnitVariable, HyperplaneSequence>;

struct BnbLimits {
    long max_nodes = 1'000'000;
    long max_lp_solves = 1'000'000;
};

enum class SolveStatus { ProvenInfeasible, FeasibleFound, BudgetExhausted, Inconclusive };

inline const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::ProvenInfeasible: return "proven-infeasible";
        case SolveStatus::FeasibleFound: return "feasible-found";
        case SolveStatus::BudgetExhausted: return "budget-exhausted";
        case SolveStatus::Inconclusive: return "inconclusive";
    }
    return "?";
}

struct TreeNode {
    long id = 0;
    long parent = -1;
    int depth = 0;
    std::string constraint;
    std::string status;
};

struct BnbOutcome {
    SolveStatus status = SolveStatus::Inconclusive;
    std::vector<Int> point;  // integral witness when FeasibleFound
    long nodes_created = 0;
    long nodes_lp_solved = 0;
    std::vector<TreeNode> tree;
    std::vector<long> hyperplane_children;  // children created per hyperplane depth
};

// One child per integer level of c.x over the node's LP range; empty when the
// range contains no integer. Requires the node to be LP-feasible.
inline std::vector<LinearSystem> branch_hyperplane(const LinearSystem& node, const IntVec& c) {
    auto w = width_along(c, node);
    if (!w) throw std::invalid_argument("branch_hyperplane: node is LP-infeasible");
    Int lo = ceil_int(w->min), hi = floor_int(w->max);
    std::vector<LinearSystem> children;
    for (Int v = lo; v <= hi; ++v) {
        LinearSystem child = node;
        child.add_eq(c, Rat(v));
        children.push_back(std::move(child));
    }
    return children;
}

namespace detail {

inline bool witness_integral(const RatVec& w) {
    for (const Rat& x : w)
        if (!is_integer(x)) return false;
    return true;
}

inline std::vector<Int> to_int_point(const RatVec& w) {
    std::vector<Int> p(w.size());
    for (size_t i = 0; i < w.size(); ++i) p[i] = num(w[i]);
    return p;
}

inline int pick_branch_var(const RatVec& w, UnitVariable::Order order) {
    int pick = -1;
    Rat best_score = 0;
    for (size_t j = 0; j < w.size(); ++j) {
        if (is_integer(w[j])) continue;
        if (order == UnitVariable::Order::FirstFirst) return static_cast<int>(j);
        if (order == UnitVariable::Order::LastFirst) {
            pick = static_cast<int>(j);
            continue;
        }
        Rat frac = w[j] - Rat(floor_int(w[j]));
        Rat score = frac <= Rat(1, 2) ? frac : Rat(1) - frac;
        if (pick < 0 || score > best_score) {
            pick = static_cast<int>(j);
            best_score = score;
        }
    }
    return pick;
}

class BnbEngine {
public:
    BnbEngine(const BranchStrategy& strategy, const BnbLimits& limits)
        : strategy_(strategy), limits_(limits) {}

    BnbOutcome run(const LinearSystem& root) {
        out_.tree.push_back(TreeNode{0, -1, 0, "root", "open"});
        OptResult rootlp = solve_lp(root);
        if (rootlp.status == LpStatus::Infeasible) {
            out_.tree[0].status = "lp-infeasible";
            out_.status = SolveStatus::ProvenInfeasible;
            return out_;
        }
        bool done = process(root, rootlp, 0, 0);
        out_.tree[0].status = node_status_;
        if (found_) out_.status = SolveStatus::FeasibleFound;
        else if (budget_hit_) out_.status = SolveStatus::BudgetExhausted;
        else if (unresolved_) out_.status = SolveStatus::Inconclusive;
        else out_.status = SolveStatus::ProvenInfeasible;
        (void)done;
        return out_;
    }

private:
    const BranchStrategy& strategy_;
    BnbLimits limits_;
    BnbOutcome out_;
    bool found_ = false, budget_hit_ = false, unresolved_ = false;
    std::string node_status_;  // status of the node most recently processed

    OptResult solve_lp(const LinearSystem& sys) {
        ++out_.nodes_lp_solved;
        return lp_feasible_point(sys);
    }

    bool budget_ok() {
        if (out_.nodes_created >= limits_.max_nodes || out_.nodes_lp_solved >= limits_.max_lp_solves) {
            budget_hit_ = true;
            return false;
        }
        return true;
    }

    // Processes an LP-feasible node. Returns true if the search should stop.
    bool process(const LinearSystem& sys, const OptResult& lp, int depth, long id) {
        if (witness_integral(lp.witness)) {
            out_.point = to_int_point(lp.witness);
            found_ = true;
            node_status_ = "feasible";
            return true;
        }
        if (const auto* hs = std::get_if<HyperplaneSequence>(&strategy_)) {
            if (depth < static_cast<int>(hs->directions.size()))
                return branch_on_hyperplane(sys, hs->directions[static_cast<size_t>(depth)], depth, id);
            if (!hs->fall_back_to_variables) {
                unresolved_ = true;
                node_status_ = "unresolved";
                return false;
            }
            return branch_on_variable(sys, lp, depth, id, hs->fallback_order);
        }
        return branch_on_variable(sys, lp, depth, id, std::get<UnitVariable>(strategy_).order);
    }

    bool branch_on_hyperplane(const LinearSystem& sys, const IntVec& c, int depth, long id) {
        OptResult mx = lp_optimize(c, Sense::Max, sys);
        ++out_.nodes_lp_solved;
        OptResult mn = lp_optimize(c, Sense::Min, sys);
        ++out_.nodes_lp_solved;
        Int lo = ceil_int(mn.value), hi = floor_int(mx.value);
        if (lo > hi) {
            // No integer level of c.x exists in this node: since every variable is
            // integer-constrained and c is integral, the node has no integer point.
            node_status_ = "pruned-empty-interval";
            return false;
        }
        if (static_cast<size_t>(depth) >= out_.hyperplane_children.size())
            out_.hyperplane_children.resize(static_cast<size_t>(depth) + 1, 0);
        node_status_ = "branched";
        for (Int v = lo; v <= hi; ++v) {
            if (!budget_ok()) return true;
            LinearSystem child = sys;
            child.add_eq(c, Rat(v));
            ++out_.nodes_created;
            out_.hyperplane_children[static_cast<size_t>(depth)] += 1;
            long cid = out_.nodes_created;
            std::ostringstream cons;
            cons << "h" << depth << "=" << v;
            out_.tree.push_back(TreeNode{cid, id, depth + 1, cons.str(), "open"});
            size_t slot = out_.tree.size() - 1;
            OptResult lp = solve_lp(child);
            if (lp.status == LpStatus::Infeasible) {
                out_.tree[slot].status = "lp-infeasible";
                continue;
            }
            if (process(child, lp, depth + 1, cid)) {
                out_.tree[slot].status = node_status_;
                node_status_ = "branched";
                return true;
            }
            out_.tree[slot].status = node_status_;
            node_status_ = "branched";
        }
        return false;
    }

    bool branch_on_variable(const LinearSystem& sys, const OptResult& lp, int depth, long id,
                            UnitVariable::Order order) {
        int j = pick_branch_var(lp.witness, order);
        if (j < 0) {  // integral handled by caller; defensive
            out_.point = to_int_point(lp.witness);
            found_ = true;
            node_status_ = "feasible";
            return true;
        }
        Int fl = floor_int(lp.witness[static_cast<size_t>(j)]);
        node_status_ = "branched";
        for (int side = 0; side < 2; ++side) {
            if (!budget_ok()) return true;
            LinearSystem child = sys;
            std::ostringstream cons;
            if (side == 0) {
                auto [blo, bhi] = child.box[static_cast<size_t>(j)];
                child.set_box(j, blo, Bound::at(Rat(fl)));
                cons << "x" << j << "<=" << fl;
            } else {
                auto [blo, bhi] = child.box[static_cast<size_t>(j)];
                child.set_box(j, Bound::at(Rat(fl + 1)), bhi);
                cons << "x" << j << ">=" << (fl + 1);
            }
            ++out_.nodes_created;
            long cid = out_.nodes_created;
            out_.tree.push_back(TreeNode{cid, id, depth + 1, cons.str(), "open"});
            size_t slot = out_.tree.size() - 1;
            OptResult clp = solve_lp(child);
            if (clp.status == LpStatus::Infeasible) {
                out_.tree[slot].status = "lp-infeasible";
                continue;
            }
            if (process(child, clp, depth + 1, cid)) {
                out_.tree[slot].status = node_status_;
                node_status_ = "branched";
                return true;
            }
            out_.tree[slot].status = node_status_;
            node_status_ = "branched";
        }
        return false;
    }
};

}  // namespace detail

inline BnbOutcome solve_system(const LinearSystem& root, const BranchStrategy& strategy,
                               const BnbLimits& limits = {}) {
    if (const auto* hs = std::get_if<HyperplaneSequence>(&strategy))
        for (const IntVec& d : hs->directions) {
            bool nonzero = false;
            for (const Int& v : d) nonzero |= (v != 0);
            if (!nonzero) throw std::invalid_argument("solve: zero hyperplane direction");
        }
    detail::BnbEngine engine(strategy, limits);
    return engine.run(root);
}

inline BnbOutcome solve(const KnapsackInstance& inst, const BranchStrategy& strategy,
                        const BnbLimits& limits = {}) {
    return solve_system(relaxation(inst), strategy, limits);
}

// Line-oriented tree dump: id, parent, constraint, status.
inline std::string dump_tree(const BnbOutcome& out) {
    std::ostringstream os;
    for (const TreeNode& nd : out.tree)
        os << nd.id << " " << nd.parent << " " << nd.constraint << " " << nd.status << "\n";
    return os.str();
}

// ---- brute force ----

struct BruteForceResult {
    bool infeasible = true;
    std::vector<std::vector<int>> solutions;
};

// Exhaustive 0/1 enumeration with exact integer arithmetic, Gray-code order
// internally but solutions reported in ascending mask order.
inline BruteForceResult brute_force(const KnapsackInstance& inst) {
    if (inst.n > 26)
        throw std::invalid_argument("brute_force: refused, n > 26 (2^n enumeration budget)");
    BruteForceResult res;
    const uint64_t total = uint64_t(1) << inst.n;
    for (uint64_t mask = 0; mask < total; ++mask) {
        Int s = 0;
        for (int j = 0; j < inst.n; ++j)
            if (mask >> j & 1) s += inst.a[static_cast<size_t>(j)];
        if (s >= inst.beta_lo && s <= inst.beta_hi) {
            std::vector<int> x(static_cast<size_t>(inst.n));
            for (int j = 0; j < inst.n; ++j) x[static_cast<size_t>(j)] = int(mask >> j & 1);
            res.solutions.push_back(std::move(x));
        }
    }
    res.infeasible = res.solutions.empty();
    return res;
}

// ---- cascade certificates (t = 2) ----

struct CascadeCertificate {
    RatVec witness;  // point of relaxation /\ p1 x = k1+1
};

struct CertificateViolation {
    std::string lemma;  // "level-1 branch empty" or "level-2 split not closed"
    std::string detail;
};

// Verifies that the k1+1 branch is LP-feasible and that both p2-sides of it are
// LP-infeasible, which together prove integer infeasibility of the instance.
inline std::variant<CascadeCertificate, CertificateViolation> check_certificate(
    const KnapsackInstance& inst) {
    if (!inst.provenance || inst.provenance->structure.t() != 2)
        throw std::invalid_argument("check_certificate: requires t=2 provenance");
    const CascadeStructure& s = inst.provenance->structure;
    const Int& k1 = s.k[0];
    const Int& k2 = s.k[1];
    LinearSystem branch = relaxation(inst);
    branch.add_eq(s.p[0], Rat(k1 + 1));
    OptResult w = lp_feasible_point(branch);
    if (w.status != LpStatus::Optimal)
        return CertificateViolation{"lemma1", "branch p1.x = k1+1 is LP-infeasible"};
    {
        LinearSystem left = branch;
        left.add_le(s.p[1], Rat(k2));
        if (lp_feasible_point(left).status == LpStatus::Optimal)
            return CertificateViolation{"lemma2", "side p2.x <= k2 is LP-feasible"};
    }
    {
        LinearSystem right = branch;
        right.add_ge(s.p[1], Rat(k2 + 1));
        if (lp_feasible_point(right).status == LpStatus::Optimal)
            return CertificateViolation{"lemma2", "side p2.x >= k2+1 is LP-feasible"};
    }
    return CascadeCertificate{w.witness};
}

// Hyperplane-only infeasibility proof along the given directions: every leaf of
// the level tree must die by an empty integer interval or an infeasible LP.
inline bool cascade_proves_infeasible(const KnapsackInstance& inst,
                                      const std::vector<IntVec>& directions,
                                      const BnbLimits& limits = {}) {
    HyperplaneSequence hs{directions, /*fall_back_to_variables=*/false};
    BnbOutcome out = solve(inst, BranchStrategy{hs}, limits);
    return out.status == SolveStatus::ProvenInfeasible;
}

}  // namespace ckp
