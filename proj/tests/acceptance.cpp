// Acceptance suite: one pass/fail line per criterion, exit code = failures.

#include "ckp/bnb.hpp"
#include "ckp/cbr.hpp"
#include "ckp/generator.hpp"
#include "ckp/io.hpp"
#include "ckp/width.hpp"

#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <vector>

using namespace ckp;

namespace {

int failures = 0;

void report(int idx, const std::string& name, bool ok, const std::string& detail,
            double seconds) {
    std::ostringstream line;
    line << (ok ? "[PASS] " : "[FAIL] ") << idx << ". " << name;
    if (!detail.empty()) line << " — " << detail;
    line << " (" << std::fixed;
    line.precision(2);
    line << seconds << "s)";
    std::cout << line.str() << std::endl;
    if (!ok) ++failures;
}

void criterion(int idx, const std::string& name,
               const std::function<bool(std::string&)>& body) {
    auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report(idx, name, ok, detail, secs);
}

KnapsackInstance fixture(const std::string& name) {
    return instance_from_json(read_json_file(std::string(CKP_FIXTURE_DIR) + "/" + name));
}

HyperplaneSequence cascade_of(const KnapsackInstance& inst) {
    HyperplaneSequence hs;
    for (const auto& p : inst.provenance->structure.p) hs.directions.push_back(p);
    return hs;
}

IntVec p1v() { return to_int_vec({1, 1, 1, 1, 2, 2, 2, 2, 3, 3, 3, 3}); }
IntVec p2v() { return to_int_vec({1, 2, 3, 4, 1, 2, 3, 4, 1, 2, 3, 4}); }
IntVec rv() { return to_int_vec({-1, 0, 1, -1, 0, 1, -1, 0, 1, -1, 0, 1}); }

bool expect(bool cond, const std::string& what, std::string& detail) {
    if (!cond && detail.empty()) detail = what;
    return cond;
}

}  // namespace

int main() {
    criterion(1, "generator golden trace", [](std::string& d) {
        GenResult g = generate_ckp(p1v(), p2v(), rv());
        auto* inst = std::get_if<KnapsackInstance>(&g);
        if (!inst) {
            d = "generation failed";
            return false;
        }
        const auto& s = inst->provenance->structure;
        const auto& tr = inst->provenance->trace->levels;
        bool ok = true;
        ok &= expect(s.k == std::vector<Int>{12, 16}, "k", d);
        ok &= expect(tr[0].gamma == 24 && tr[0].delta == 0, "gamma1/delta1", d);
        ok &= expect(tr[1].gamma == 23 && tr[1].delta == 9, "gamma2/delta2", d);
        ok &= expect(tr[1].eta == 4 && tr[1].mu == -4, "eta2/mu2", d);
        ok &= expect(tr[1].M == 10, "M2", d);
        ok &= expect(*tr[1].eta_prime == 164 && *tr[1].mu_prime == 166, "eta2'/mu2'", d);
        ok &= expect(tr[1].beta_lo == 165 && tr[1].beta_hi == 165, "beta2", d);
        ok &= expect(tr[0].eta == 221 && tr[0].mu == 100, "eta1/mu1", d);
        ok &= expect(tr[0].M == 66, "M1", d);
        ok &= expect(inst->beta_lo == 1023 && inst->beta_hi == 1023, "beta", d);
        ok &= expect(inst->a == fixture("kp1.json").a, "coefficients", d);
        return ok;
    });

    criterion(2, "width table two-decimal displays", [](std::string& d) {
        struct Row {
            const char* file;
            const char *p1max, *p1min, *p1w;
            long p1iw;
            const char* p2w;
        };
        // printed width figures equal display(max) - display(min)
        std::vector<Row> rows = {{"kp1.json", "13.99", "12.13", "1.86", 1, "12.17"},
                                 {"kp2.json", "14.17", "12.22", "1.95", 2, "12.02"},
                                 {"kp3.json", "15.22", "12.86", "2.36", 3, "11.28"}};
        bool ok = true;
        for (const auto& row : rows) {
            KnapsackInstance inst = fixture(row.file);
            auto w1 = width_along(inst.provenance->structure.p[0], relaxation(inst));
            auto w2 = width_along(inst.provenance->structure.p[1], relaxation(inst));
            if (!w1 || !w2) return false;
            ok &= expect(display_fixed(w1->max, 2) == row.p1max, std::string(row.file) + " p1 max", d);
            ok &= expect(display_fixed(w1->min, 2) == row.p1min, std::string(row.file) + " p1 min", d);
            ok &= expect(display_width_of_bounds(*w1, 2) == row.p1w,
                         std::string(row.file) + " p1 width", d);
            ok &= expect(w1->iwidth == row.p1iw, std::string(row.file) + " p1 iwidth", d);
            ok &= expect(display_width_of_bounds(*w2, 2) == row.p2w,
                         std::string(row.file) + " p2 width", d);
        }
        KnapsackInstance k1 = fixture("kp1.json");
        auto w2k1 = width_along(k1.provenance->structure.p[1], relaxation(k1));
        ok &= expect(display_fixed(w2k1->max, 2) == "22.16" && display_fixed(w2k1->min, 2) == "9.99",
                     "kp1 p2 range", d);
        LinearSystem cond = relaxation(k1);
        cond.add_eq(k1.provenance->structure.p[0], Rat(13));
        auto wc = width_along(k1.provenance->structure.p[1], cond);
        ok &= expect(display_fixed(wc->max, 2) == "16.90" && display_fixed(wc->min, 2) == "16.10",
                     "kp1 conditional p2 range", d);
        return ok;
    });

    criterion(3, "brute-force infeasibility ground truth", [](std::string& d) {
        bool ok = true;
        for (const char* f : {"kp1.json", "kp2.json", "kp3.json", "kp4.json"}) {
            auto t0 = std::chrono::steady_clock::now();
            auto bf = brute_force(fixture(f));
            double secs =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            ok &= expect(bf.infeasible, std::string(f) + " not infeasible", d);
            ok &= expect(secs < 1.0, std::string(f) + " too slow", d);
        }
        return ok;
    });

    criterion(4, "cascade branching with frozen node counts", [](std::string& d) {
        struct Row {
            const char* file;
            long frozen, budget, level1;
        };
        std::vector<Row> rows = {{"kp1.json", 1, 2, 1},
                                 {"kp2.json", 2, 3, 2},
                                 {"kp3.json", 3, 4, 3},
                                 {"kp4.json", 6, 7, 2}};
        bool ok = true;
        for (const auto& row : rows) {
            KnapsackInstance inst = fixture(row.file);
            BnbOutcome out = solve(inst, BranchStrategy{cascade_of(inst)});
            ok &= expect(out.status == SolveStatus::ProvenInfeasible,
                         std::string(row.file) + " not proven", d);
            ok &= expect(out.nodes_created == row.frozen, std::string(row.file) + " frozen count", d);
            ok &= expect(out.nodes_created <= row.budget, std::string(row.file) + " budget", d);
            ok &= expect(!out.hyperplane_children.empty() &&
                             out.hyperplane_children[0] == row.level1,
                         std::string(row.file) + " level-1 children", d);
        }
        return ok;
    });

    criterion(5, "variable branching strictly harder than the cascade", [](std::string& d) {
        bool ok = true;
        for (const char* f : {"kp1.json", "kp2.json", "kp3.json", "kp4.json"}) {
            KnapsackInstance inst = fixture(f);
            BnbOutcome casc = solve(inst, BranchStrategy{cascade_of(inst)});
            BnbOutcome unit = solve(inst, BranchStrategy{UnitVariable{}});
            ok &= expect(unit.status == SolveStatus::ProvenInfeasible,
                         std::string(f) + " unit not proven", d);
            ok &= expect(unit.nodes_created > casc.nodes_created, std::string(f) + " not harder", d);
        }
        return ok;
    });

    criterion(6, "cascade certificates on seeded generation", [](std::string& d) {
        auto cert1 = check_certificate(fixture("kp1.json"));
        if (!std::holds_alternative<CascadeCertificate>(cert1)) {
            d = "kp1 certificate failed";
            return false;
        }
        int generated = 0, certified = 0, violations = 0;
        for (uint64_t seed = 0; seed < 100; ++seed) {
            auto res = generate_cascade(12, 2, seed);
            auto* ok = std::get_if<CascadeSuccess>(&res);
            if (!ok) continue;  // generation failures excluded
            ++generated;
            auto cert = check_certificate(ok->instance);
            if (std::holds_alternative<CascadeCertificate>(cert))
                ++certified;
            else
                ++violations;
        }
        std::ostringstream det;
        det << generated << " generated, " << certified << " certified, " << violations
            << " violations";
        d = det.str();
        return certified >= 95 && violations == 0;
    });

    criterion(7, "basis-reduction preconditioning effectiveness", [](std::string& d) {
        bool ok = true;
        for (const char* f : {"kp1.json", "kp2.json", "kp3.json", "kp4.json"}) {
            auto ref = reformulate(fixture(f));
            BnbOutcome out = solve_system(
                reform_system(ref), BranchStrategy{UnitVariable{UnitVariable::Order::LastFirst}});
            ok &= expect(out.status == SolveStatus::ProvenInfeasible,
                         std::string(f) + " reformulation unsolved", d);
            ok &= expect(out.nodes_created <= 50, std::string(f) + " above 50 nodes", d);
        }
        int solved = 0, made = 0;
        std::ostringstream det;
        for (uint64_t seed = 201; made < 5 && seed < 240; ++seed) {
            auto res = generate_cascade(50, 3, seed, {2, 2});
            auto* gen = std::get_if<CascadeSuccess>(&res);
            if (!gen) continue;
            ++made;
            auto ref = reformulate(gen->instance);
            BnbLimits limits;
            limits.max_nodes = 10'000;
            limits.max_lp_solves = 200'000;
            BnbOutcome out =
                solve_system(reform_system(ref),
                             BranchStrategy{UnitVariable{UnitVariable::Order::LastFirst}},
                             limits);
            if (out.status == SolveStatus::ProvenInfeasible) {
                ++solved;
                det << "n50 seed " << seed << ": " << out.nodes_created << " nodes; ";
            } else {
                det << "n50 seed " << seed << ": " << to_string(out.status) << " after "
                    << out.nodes_created << " nodes; ";
            }
        }
        d = det.str();
        return ok && made == 5 && solved == 5;
    });

    criterion(8, "n=50 cascade property across seeds", [](std::string& d) {
        int succeeded = 0, triple_ok = 0;
        for (uint64_t seed = 1; seed <= 10; ++seed) {
            auto res = generate_cascade(50, 3, seed, {2, 2});
            auto* gen = std::get_if<CascadeSuccess>(&res);
            if (!gen) continue;
            ++succeeded;
            const KnapsackInstance& inst = gen->instance;
            const auto& s = inst.provenance->structure;
            auto iw1 = iwidth_along(s.p[0], relaxation(inst));
            LinearSystem c1 = relaxation(inst);
            c1.add_eq(s.p[0], Rat(s.k[0] + 1));
            auto w2 = width_along(s.p[1], c1);
            LinearSystem c2 = c1;
            c2.add_eq(s.p[1], Rat(s.k[1] + 1));
            auto w3 = width_along(s.p[2], c2);
            if (iw1 && *iw1 == 2 && w2 && w2->iwidth == 2 && w3 && w3->iwidth == 0 &&
                w3->width < 1)
                ++triple_ok;
        }
        std::ostringstream det;
        det << succeeded << "/10 seeds generated, " << triple_ok << " satisfy the width triple";
        d = det.str();
        return succeeded >= 6 && triple_ok == succeeded;
    });

    criterion(9, "lattice reduction and transfer-bound suite", [](std::string& d) {
        std::mt19937_64 rng(90001);
        int reduced = 0;
        while (reduced < 200) {
            size_t n = 2 + rng() % 7, m = n + rng() % 3;
            IntMat b(m, n);
            for (size_t i = 0; i < m; ++i)
                for (size_t j = 0; j < n; ++j) b.at(i, j) = long(rng() % 61) - 30;
            if (rank(b) != n) continue;
            auto rb = lll_reduce(b, Rat(99, 100));
            Int dt = det(rb.transform);
            if (!(dt == 1 || dt == -1)) {
                d = "transform not unimodular";
                return false;
            }
            if (mul(b, rb.transform) != rb.reduced) {
                d = "B*U mismatch";
                return false;
            }
            if (!is_lll_reduced(rb.reduced, Rat(99, 100))) {
                d = "size-reduction or Lovasz condition failed";
                return false;
            }
            ++reduced;
        }
        int kernels = 0;
        while (kernels < 30) {
            size_t t = 1 + rng() % 2, n = 3 + rng() % 3;
            if (n <= t) continue;
            IntMat p(t, n);
            for (size_t i = 0; i < t; ++i)
                for (size_t j = 0; j < n; ++j) p.at(i, j) = 1 + long(rng() % 3);
            if (rank(p) != t) continue;
            IntMat k = kernel_basis(p);
            for (size_t j = 0; j < k.cols; ++j)
                if (!(mul(p, k.col(j)) == IntVec(t, Int(0)))) {
                    d = "kernel vector does not annihilate";
                    return false;
                }
            ++kernels;
        }
        int transfers = 0;
        while (transfers < 50) {
            size_t t = 1 + rng() % 2, n = 4 + rng() % 2;
            IntMat p(t, n);
            for (size_t i = 0; i < t; ++i)
                for (size_t j = 0; j < n; ++j) p.at(i, j) = 1 + long(rng() % 3);
            if (rank(p) != t) continue;
            IntVec r(n);
            for (size_t j = 0; j < n; ++j) r[j] = long(rng() % 3) - 1;
            std::vector<Int> m;
            Int base = 40 + long(rng() % 200);
            for (size_t i = 0; i < t; ++i) {
                m.push_back(base);
                base = base / 4 + 1;
            }
            auto rep = check_minima_transfer(p, r, m);
            if (!rep.all_hold) {
                d = "transfer bound violated";
                return false;
            }
            ++transfers;
        }
        d = "200 reductions, 30 kernels, 50 transfer checks";
        return true;
    });

    criterion(10, "threshold-driven zero blocks", [](std::string& d) {
        std::mt19937_64 rng(1010);
        int done = 0;
        while (done < 20) {
            size_t t = 1 + rng() % 2;
            size_t n = 4 + rng() % 2;
            if (n - t < 1) continue;
            IntMat p(t, n);
            for (size_t i = 0; i < t; ++i)
                for (size_t j = 0; j < n; ++j) p.at(i, j) = 1 + long(rng() % 3);
            if (rank(p) != t) continue;
            IntVec r(n);
            for (size_t j = 0; j < n; ++j) r[j] = long(rng() % 3) - 1;
            std::vector<int> s(t);
            int smax = static_cast<int>(n - t);
            s[0] = 1 + int(rng() % smax);
            for (size_t i = 1; i < t; ++i) s[i] = 1 + int(rng() % s[i - 1]);
            auto th = m_thresholds(p, r, s);
            CascadeStructure cs;
            for (size_t i = 0; i < t; ++i) cs.p.push_back(p.row(i));
            cs.r = r;
            cs.M = th.suggested_m;
            cs.k.assign(t, Int(0));
            cs.targets.assign(t > 0 ? t - 1 : 0, 1);
            KnapsackInstance inst;
            inst.n = static_cast<int>(n);
            inst.a = evaluate_coefficients(cs);
            inst.beta_lo = 0;
            inst.beta_hi = 1;
            auto ref = reformulate(inst, Rat(99, 100));
            auto prof = zero_block_profile(cs, ref.transform);
            for (size_t i = 0; i < t; ++i)
                if (prof.achieved[i] < s[i]) {
                    std::ostringstream det;
                    det << "case " << done << ": achieved " << prof.achieved[i] << " < s " << s[i];
                    d = det.str();
                    return false;
                }
            ++done;
        }
        d = "20 cases, prefixes dominate every request";
        return true;
    });

    criterion(11, "base/reformulation equivalence and solver agreement", [](std::string& d) {
        std::mt19937_64 rng(777);
        int done = 0, feasible_count = 0, infeasible_count = 0;
        while (done < 100) {
            KnapsackInstance inst;
            if (done % 10 == 3) {
                auto res = generate_cascade(8 + 2 * (done % 3), 2, 5000 + uint64_t(done));
                auto* gen = std::get_if<CascadeSuccess>(&res);
                if (!gen) continue;
                inst = gen->instance;
            } else {
                int n = 6 + int(rng() % 9);
                inst.n = n;
                inst.a.resize(size_t(n));
                for (int j = 0; j < n; ++j) inst.a[size_t(j)] = 1 + long(rng() % 30);
                long lo = long(rng() % 70);
                inst.beta_lo = lo;
                inst.beta_hi = lo + long(rng() % 3);
            }
            auto bf = brute_force(inst);
            bf.infeasible ? ++infeasible_count : ++feasible_count;
            auto ref = reformulate(inst);
            LinearSystem ysys = reform_system(ref);
            std::set<std::vector<long>> images;
            for (const auto& x : bf.solutions) {
                IntVec xi(x.begin(), x.end());
                IntVec y = push_forward(xi, ref);
                RatVec yr(y.begin(), y.end());
                if (!ysys.contains(yr)) {
                    d = "mapped solution infeasible in the reformulation";
                    return false;
                }
                if (pullback(y, ref) != xi) {
                    d = "pullback does not invert";
                    return false;
                }
                std::vector<long> key;
                for (const Int& v : y) key.push_back(long(v));
                if (!images.insert(key).second) {
                    d = "mapping not injective";
                    return false;
                }
            }
            // reverse inclusion: U maps y-solutions into 0/1 base points, so the
            // counts agree iff the y system has no extras; verify by solving the
            // reformulation when the base side is infeasible
            if (bf.infeasible) {
                BnbOutcome out = solve_system(
                    ysys, BranchStrategy{UnitVariable{UnitVariable::Order::LastFirst}});
                if (out.status != SolveStatus::ProvenInfeasible) {
                    d = "reformulation not infeasible with the base";
                    return false;
                }
            }
            for (auto order : {UnitVariable::Order::LastFirst, UnitVariable::Order::FirstFirst,
                               UnitVariable::Order::MostFractional}) {
                BnbOutcome out = solve(inst, BranchStrategy{UnitVariable{order}});
                if ((out.status == SolveStatus::ProvenInfeasible) != bf.infeasible) {
                    d = "variable-order solve disagrees with enumeration";
                    return false;
                }
            }
            HyperplaneSequence hs;
            if (inst.provenance) {
                hs = cascade_of(inst);
            } else {
                IntVec dir(size_t(inst.n));
                for (int j = 0; j < inst.n; ++j) dir[size_t(j)] = 1 + long(rng() % 3);
                hs.directions.push_back(dir);
            }
            BnbOutcome hout = solve(inst, BranchStrategy{hs});
            if ((hout.status == SolveStatus::ProvenInfeasible) != bf.infeasible) {
                d = "hyperplane solve disagrees with enumeration";
                return false;
            }
            ++done;
        }
        std::ostringstream det;
        det << feasible_count << " feasible, " << infeasible_count << " infeasible";
        d = det.str();
        return feasible_count > 0 && infeasible_count > 0;
    });

    std::cout << (failures == 0 ? "acceptance: all criteria passed"
                                : "acceptance: " + std::to_string(failures) + " criterion(s) failed")
              << std::endl;
    return failures;
}
