// Command-line front end: generate, inspect, solve, width, cbr, verify.
// Exit codes: 0 success/confirmed, 1 usage, 2 I/O, 3 budget exhausted,
// 4 property violation.

#include "ckp/bnb.hpp"
#include "ckp/cbr.hpp"
#include "ckp/generator.hpp"
#include "ckp/io.hpp"
#include "ckp/width.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

using namespace ckp;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;
constexpr int kExitBudget = 3;
constexpr int kExitViolation = 4;

struct CliError {
    int code;
    std::string message;
};

json load_file(const std::string& path) {
    try {
        return read_json_file(path);
    } catch (const std::exception& e) {
        throw CliError{kExitIo, e.what()};
    }
}

KnapsackInstance load_instance(const std::string& path) {
    json j = load_file(path);
    try {
        return instance_from_json(j);
    } catch (const std::exception& e) {
        throw CliError{kExitIo, std::string("parse error: ") + e.what()};
    }
}

IntVec parse_direction(const std::string& spec, const KnapsackInstance& inst) {
    if (spec == "a") return inst.a;
    auto colon = spec.find(':');
    std::string kind = colon == std::string::npos ? spec : spec.substr(0, colon);
    std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
    if (kind == "unit") {
        int j = std::stoi(arg);
        if (j < 1 || j > inst.n) throw CliError{kExitUsage, "unit index out of range"};
        IntVec e(static_cast<size_t>(inst.n), Int(0));
        e[static_cast<size_t>(j - 1)] = 1;
        return e;
    }
    if (kind == "p") {
        if (!inst.provenance) throw CliError{kExitUsage, "p:i needs provenance"};
        int i = std::stoi(arg);
        const auto& s = inst.provenance->structure;
        if (i < 1 || i > s.t()) throw CliError{kExitUsage, "p index out of range"};
        return s.p[static_cast<size_t>(i - 1)];
    }
    if (kind == "custom") {
        IntVec v;
        std::stringstream ss(arg);
        std::string tok;
        while (std::getline(ss, tok, ',')) v.emplace_back(std::stoll(tok));
        if (static_cast<int>(v.size()) != inst.n)
            throw CliError{kExitUsage, "custom direction length mismatch"};
        return v;
    }
    throw CliError{kExitUsage, "direction must be unit:j, p:i, a, or custom:c1,c2,..."};
}

std::string insert_seed(const std::string& path, uint64_t seed) {
    std::filesystem::path p(path);
    std::filesystem::path out = p.parent_path() / (p.stem().string() + "-" + std::to_string(seed) +
                                                   p.extension().string());
    return out.string();
}

int cmd_generate(int n, int t, uint64_t seed, std::vector<int> targets, int attempts, int count,
                 int jobs, const std::string& out, bool as_json) {
    CascadeOptions opts;
    opts.attempt_budget = attempts;
    std::vector<uint64_t> seeds;
    for (int i = 0; i < count; ++i) seeds.push_back(seed + static_cast<uint64_t>(i));
    std::vector<CascadeResult> results(seeds.size(), CascadeFailure{});
    std::mutex mtx;
    size_t next = 0;
    auto worker = [&] {
        while (true) {
            size_t idx;
            {
                std::lock_guard<std::mutex> lk(mtx);
                if (next >= seeds.size()) return;
                idx = next++;
            }
            results[idx] = generate_cascade(n, t, seeds[idx], targets, opts);
        }
    };
    if (jobs > 1 && seeds.size() > 1) {
        std::vector<std::thread> pool;
        for (int i = 0; i < jobs; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    } else {
        worker();
    }
    int failures = 0;
    for (size_t i = 0; i < seeds.size(); ++i) {
        if (auto* ok = std::get_if<CascadeSuccess>(&results[i])) {
            std::string path = count > 1 ? insert_seed(out, seeds[i]) : out;
            try {
                write_json_file(path, instance_to_json(ok->instance));
            } catch (const std::exception& e) {
                std::cerr << "error: " << e.what() << "\n";
                return kExitIo;
            }
            if (as_json) {
                json j{{"seed", seeds[i]}, {"attempts", ok->attempts_used}, {"out", path}};
                std::cout << j.dump() << "\n";
            } else {
                std::cout << "seed " << seeds[i] << ": written " << path << " after "
                          << ok->attempts_used << " attempt(s)\n";
            }
        } else {
            auto& f = std::get<CascadeFailure>(results[i]);
            ++failures;
            std::cerr << "seed " << seeds[i] << ": attempt budget exhausted after " << f.attempts
                      << " attempts; failure histogram:\n";
            for (const auto& [k, v] : f.histogram) std::cerr << "  " << k << ": " << v << "\n";
        }
    }
    return failures ? kExitBudget : kExitOk;
}

BranchStrategy make_strategy(const std::string& name, const std::string& policy,
                             const std::string& hyperplanes_file, const KnapsackInstance& inst) {
    UnitVariable::Order order = UnitVariable::Order::LastFirst;
    if (policy == "first") order = UnitVariable::Order::FirstFirst;
    else if (policy == "mostfrac") order = UnitVariable::Order::MostFractional;
    else if (policy != "last") throw CliError{kExitUsage, "policy must be last, first or mostfrac"};
    if (name == "variable") return UnitVariable{order};
    if (name == "cascade") {
        if (!inst.provenance) throw CliError{kExitUsage, "cascade strategy requires provenance"};
        HyperplaneSequence hs;
        for (const auto& p : inst.provenance->structure.p) hs.directions.push_back(p);
        hs.fallback_order = order;
        return hs;
    }
    if (name == "hyperplanes") {
        if (hyperplanes_file.empty())
            throw CliError{kExitUsage, "hyperplanes strategy requires --hyperplanes-file"};
        std::ifstream in(hyperplanes_file);
        if (!in) throw CliError{kExitIo, "cannot open " + hyperplanes_file};
        HyperplaneSequence hs;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            IntVec d;
            std::stringstream ss(line);
            std::string tok;
            while (std::getline(ss, tok, ',')) d.emplace_back(std::stoll(tok));
            if (static_cast<int>(d.size()) != inst.n)
                throw CliError{kExitUsage, "hyperplane direction length mismatch"};
            hs.directions.push_back(std::move(d));
        }
        hs.fallback_order = order;
        return hs;
    }
    throw CliError{kExitUsage, "strategy must be variable, cascade or hyperplanes"};
}

int cmd_solve(const std::string& file, const std::string& strategy, const std::string& policy,
              const std::string& hyperplanes_file, long limit, long lp_limit, bool as_json,
              bool tree) {
    json raw = load_file(file);
    bool reformed = raw.contains("reformulation");
    KnapsackInstance inst;
    LinearSystem sys;
    if (reformed) {
        ReformulatedInstance ref;
        try {
            ref = reformulation_from_json(raw);
        } catch (const std::exception& e) {
            throw CliError{kExitIo, std::string("parse error: ") + e.what()};
        }
        inst = ref.base;
        sys = reform_system(ref);
        if (strategy == "cascade")
            throw CliError{kExitUsage, "cascade strategy applies to base instances only"};
    } else {
        try {
            inst = instance_from_json(raw);
        } catch (const std::exception& e) {
            throw CliError{kExitIo, std::string("parse error: ") + e.what()};
        }
        sys = relaxation(inst);
    }
    BranchStrategy st = make_strategy(strategy, policy, hyperplanes_file, inst);
    BnbLimits limits;
    limits.max_nodes = limit;
    limits.max_lp_solves = lp_limit;
    BnbOutcome out = solve_system(sys, st, limits);
    if (as_json) {
        json j{{"status", to_string(out.status)},
               {"nodes_created", out.nodes_created},
               {"nodes_lp_solved", out.nodes_lp_solved},
               {"strategy", strategy},
               {"space", reformed ? "reformulation" : "base"}};
        if (out.status == SolveStatus::FeasibleFound) {
            json pt = json::array();
            for (const Int& v : out.point) pt.push_back(to_i64(v));
            j["point"] = pt;
        }
        json lc = json::array();
        for (long c : out.hyperplane_children) lc.push_back(c);
        j["hyperplane_children"] = lc;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "status: " << to_string(out.status) << "\n"
                  << "nodes created: " << out.nodes_created << "\n"
                  << "lp solves: " << out.nodes_lp_solved << "\n";
        if (!out.hyperplane_children.empty()) {
            std::cout << "children per hyperplane level:";
            for (long c : out.hyperplane_children) std::cout << " " << c;
            std::cout << "\n";
        }
        if (out.status == SolveStatus::FeasibleFound) {
            std::cout << "point:";
            for (const Int& v : out.point) std::cout << " " << v;
            std::cout << "\n";
        }
    }
    if (tree) std::cout << dump_tree(out);
    return out.status == SolveStatus::BudgetExhausted ? kExitBudget : kExitOk;
}

int cmd_width(const std::string& file, const std::string& direction, bool as_json) {
    KnapsackInstance inst = load_instance(file);
    IntVec dir = parse_direction(direction, inst);
    auto w = width_along(dir, relaxation(inst));
    if (!w) {
        std::cerr << "empty polyhedron: no width defined\n";
        return kExitViolation;
    }
    if (as_json) {
        json j{{"direction", intvec_to_json(dir)},
               {"max", rat_to_json(w->max)},
               {"min", rat_to_json(w->min)},
               {"width", rat_to_json(w->width)},
               {"iwidth", to_i64(w->iwidth)},
               {"display",
                json{{"max", display_fixed(w->max, 2)},
                     {"min", display_fixed(w->min, 2)},
                     {"width", display_width_of_bounds(*w, 2)}}}};
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "max: " << num(w->max) << "/" << den(w->max) << " = "
                  << display_fixed(w->max, 2) << "\n"
                  << "min: " << num(w->min) << "/" << den(w->min) << " = "
                  << display_fixed(w->min, 2) << "\n"
                  << "width: " << num(w->width) << "/" << den(w->width) << " = "
                  << display_width_of_bounds(*w, 2) << "\n"
                  << "iwidth: " << w->iwidth << "\n";
    }
    return kExitOk;
}

int cmd_cbr(const std::string& file, const std::string& delta_str, bool deep,
            const std::string& out, bool as_json) {
    KnapsackInstance inst = load_instance(file);
    Rat delta(99, 100);
    if (!delta_str.empty()) {
        auto slash = delta_str.find('/');
        if (slash == std::string::npos) throw CliError{kExitUsage, "delta must be num/den"};
        delta = Rat(Int(delta_str.substr(0, slash)), Int(delta_str.substr(slash + 1)));
    }
    ReformulatedInstance ref;
    try {
        ref = reformulate(inst, delta, deep);
    } catch (const std::exception& e) {
        throw CliError{kExitUsage, e.what()};
    }
    try {
        write_json_file(out, reformulation_to_json(ref));
    } catch (const std::exception& e) {
        throw CliError{kExitIo, e.what()};
    }
    Int before_max = 0, after_max = 0;
    for (const Int& v : ref.col_norms_before)
        if (v > before_max) before_max = v;
    for (const Int& v : ref.col_norms_after)
        if (v > after_max) after_max = v;
    if (as_json) {
        json j{{"out", out},
               {"max_col_norm_sq_before", to_i64(before_max)},
               {"max_col_norm_sq_after", to_i64(after_max)}};
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "written " << out << "\n"
                  << "max column norm^2: " << before_max << " -> " << after_max << "\n";
    }
    return kExitOk;
}

int cmd_verify(const std::string& file, bool as_json) {
    KnapsackInstance inst = load_instance(file);
    std::vector<std::string> notes, violations;
    if (inst.provenance) {
        const auto& prov = *inst.provenance;
        if (evaluate_coefficients(prov.structure) == inst.a)
            notes.push_back("coefficients match provenance");
        else
            violations.push_back("coefficients do not match provenance");
        if (prov.trace && !prov.trace->levels.empty()) {
            const LevelTrace& outer = prov.trace->levels.front();
            if (outer.beta_lo == inst.beta_lo && outer.beta_hi == inst.beta_hi)
                notes.push_back("window matches trace");
            else
                violations.push_back("window does not match trace");
        }
        bool exact_level = prov.structure.t() == 2 && prov.structure.targets == std::vector<int>{1};
        if (exact_level) {
            auto cert = check_certificate(inst);
            if (auto* v = std::get_if<CertificateViolation>(&cert))
                violations.push_back(v->lemma + ": " + v->detail);
            else
                notes.push_back("cascade certificate holds");
        } else {
            notes.push_back("certificate check skipped (variant or multi-level provenance)");
        }
    }
    if (inst.n <= 26) {
        auto bf = brute_force(inst);
        if (bf.infeasible)
            notes.push_back("brute force: integer infeasible");
        else
            notes.push_back("brute force: " + std::to_string(bf.solutions.size()) + " solution(s)");
        if (inst.provenance && !bf.infeasible)
            violations.push_back("instance with cascade provenance is integer feasible");
    } else {
        notes.push_back("brute force skipped (n > 26)");
    }
    if (as_json) {
        json j{{"notes", notes}, {"violations", violations}, {"ok", violations.empty()}};
        std::cout << j.dump(2) << "\n";
    } else {
        for (const auto& s : notes) std::cout << "note: " << s << "\n";
        for (const auto& s : violations) std::cout << "violation: " << s << "\n";
        std::cout << (violations.empty() ? "verify: ok" : "verify: FAILED") << "\n";
    }
    return violations.empty() ? kExitOk : kExitViolation;
}

int cmd_inspect(const std::string& file) {
    json raw = load_file(file);
    KnapsackInstance inst;
    try {
        inst = instance_from_json(raw);
    } catch (const std::exception& e) {
        throw CliError{kExitIo, std::string("parse error: ") + e.what()};
    }
    std::cout << "n: " << inst.n << "\n";
    std::cout << "a:";
    for (const Int& v : inst.a) std::cout << " " << v;
    std::cout << "\nwindow: [" << inst.beta_lo << ", " << inst.beta_hi << "]\n";
    if (inst.provenance) {
        const auto& s = inst.provenance->structure;
        std::cout << "cascade: t=" << s.t() << " M=(";
        for (int i = 0; i < s.t(); ++i) std::cout << (i ? "," : "") << s.M[static_cast<size_t>(i)];
        std::cout << ") k=(";
        for (int i = 0; i < s.t(); ++i) std::cout << (i ? "," : "") << s.k[static_cast<size_t>(i)];
        std::cout << ") targets=(";
        for (size_t i = 0; i < s.targets.size(); ++i) std::cout << (i ? "," : "") << s.targets[i];
        std::cout << ")\n";
        std::cout << "trace: " << (inst.provenance->trace ? "present" : "absent") << "\n";
    }
    if (raw.contains("reformulation")) std::cout << "reformulation block: present\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cascade knapsack toolkit"};
    app.require_subcommand(1);

    auto* gen = app.add_subcommand("generate", "generate a seeded cascade instance");
    int n = 12, t = 2, attempts = 200, count = 1, jobs = 1, iwidth = 1;
    uint64_t seed = 0;
    std::string iwidth_levels, out_path = "instance.json";
    bool gen_json = false;
    gen->add_option("--n", n, "number of variables");
    gen->add_option("--t", t, "cascade depth (2 or 3)");
    gen->add_option("--seed", seed, "random seed");
    gen->add_option("--iwidth", iwidth, "integer width target for every outer level");
    gen->add_option("--iwidth-levels", iwidth_levels, "per-level targets, e.g. 2,1");
    gen->add_option("--attempts", attempts, "attempt budget per instance");
    gen->add_option("--count", count, "number of consecutive seeds");
    gen->add_option("--jobs", jobs, "parallel workers for batch generation");
    gen->add_option("--out", out_path, "output file");
    gen->add_flag("--json", gen_json, "machine-readable output");

    auto* solve_cmd = app.add_subcommand("solve", "prove infeasibility or find a point");
    std::string solve_file, strategy = "cascade", policy = "last", hp_file;
    long limit = 1'000'000, lp_limit = 1'000'000;
    bool solve_json = false, solve_tree = false;
    solve_cmd->add_option("--instance", solve_file, "instance file")->required();
    solve_cmd->add_option("--strategy", strategy, "variable | cascade | hyperplanes");
    solve_cmd->add_option("--policy", policy, "variable order: last | first | mostfrac");
    solve_cmd->add_option("--hyperplanes-file", hp_file, "one direction per line, comma separated");
    solve_cmd->add_option("--limit", limit, "node budget");
    solve_cmd->add_option("--lp-limit", lp_limit, "LP solve budget");
    solve_cmd->add_flag("--json", solve_json, "machine-readable output");
    solve_cmd->add_flag("--tree", solve_tree, "dump the search tree");

    auto* width_cmd = app.add_subcommand("width", "width and integer width along a direction");
    std::string width_file, direction;
    bool width_json = false;
    width_cmd->add_option("--instance", width_file, "instance file")->required();
    width_cmd->add_option("--direction", direction, "unit:j | p:i | a | custom:c1,c2,...")
        ->required();
    width_cmd->add_flag("--json", width_json, "machine-readable output");

    auto* cbr_cmd = app.add_subcommand("cbr", "basis-reduction preconditioning");
    std::string cbr_file, delta_str, cbr_out = "reformulated.json";
    bool deep = false, cbr_json = false;
    cbr_cmd->add_option("--instance", cbr_file, "instance file")->required();
    cbr_cmd->add_option("--delta", delta_str, "reduction parameter as num/den (default 99/100)");
    cbr_cmd->add_flag("--deep", deep, "enable deep insertions");
    cbr_cmd->add_option("--out", cbr_out, "output file");
    cbr_cmd->add_flag("--json", cbr_json, "machine-readable output");

    auto* verify_cmd = app.add_subcommand("verify", "brute force and certificate checks");
    std::string verify_file;
    bool verify_json = false;
    verify_cmd->add_option("--instance", verify_file, "instance file")->required();
    verify_cmd->add_flag("--json", verify_json, "machine-readable output");

    auto* inspect_cmd = app.add_subcommand("inspect", "print an instance summary");
    std::string inspect_file;
    inspect_cmd->add_option("--instance", inspect_file, "instance file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (gen->parsed()) {
            if (t < 2 || t > 3 || n < 2 * t) {
                std::cerr << "error: need t in {2,3} and n >= 2t\n";
                return kExitUsage;
            }
            std::vector<int> targets;
            if (!iwidth_levels.empty()) {
                std::stringstream ss(iwidth_levels);
                std::string tok;
                while (std::getline(ss, tok, ',')) targets.push_back(std::stoi(tok));
                if (static_cast<int>(targets.size()) != t - 1) {
                    std::cerr << "error: --iwidth-levels needs t-1 values\n";
                    return kExitUsage;
                }
            } else {
                targets.assign(static_cast<size_t>(t - 1), iwidth);
            }
            return cmd_generate(n, t, seed, targets, attempts, count, jobs, out_path, gen_json);
        }
        if (solve_cmd->parsed())
            return cmd_solve(solve_file, strategy, policy, hp_file, limit, lp_limit, solve_json,
                             solve_tree);
        if (width_cmd->parsed()) return cmd_width(width_file, direction, width_json);
        if (cbr_cmd->parsed()) return cmd_cbr(cbr_file, delta_str, deep, cbr_out, cbr_json);
        if (verify_cmd->parsed()) return cmd_verify(verify_file, verify_json);
        if (inspect_cmd->parsed()) return cmd_inspect(inspect_file);
    } catch (const CliError& e) {
        std::cerr << "error: " << e.message << "\n";
        return e.code;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitUsage;
}
