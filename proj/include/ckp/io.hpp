#pragma once

#include "ckp/cbr.hpp"
#include "ckp/instance.hpp"

#include <json.hpp>

#include <fstream>
#include <stdexcept>
#include <string>

namespace ckp {

using nlohmann::json;

// Serialized numbers are exact: integers must fit 64 bits (instance scale),
// rationals are [numerator, denominator] pairs. No floats anywhere.
inline int64_t to_i64(const Int& v) {
    if (v > Int(INT64_MAX) || v < Int(INT64_MIN))
        throw std::runtime_error("serialize: integer exceeds 64-bit instance scale");
    return static_cast<int64_t>(v);
}

inline json rat_to_json(const Rat& x) { return json::array({to_i64(num(x)), to_i64(den(x))}); }

inline Rat rat_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2) throw std::runtime_error("parse: rational must be [num, den]");
    return Rat(Int(j[0].get<int64_t>()), Int(j[1].get<int64_t>()));
}

inline json intvec_to_json(const IntVec& v) {
    json a = json::array();
    for (const Int& x : v) a.push_back(to_i64(x));
    return a;
}

inline IntVec intvec_from_json(const json& j) {
    IntVec v;
    for (const auto& x : j) v.emplace_back(x.get<int64_t>());
    return v;
}

inline json trace_to_json(const GeneratorTrace& tr) {
    json levels = json::array();
    for (const LevelTrace& lt : tr.levels) {
        json l{{"gamma", rat_to_json(lt.gamma)}, {"delta", rat_to_json(lt.delta)},
               {"k", to_i64(lt.k)},              {"eta", rat_to_json(lt.eta)},
               {"mu", rat_to_json(lt.mu)},       {"M", to_i64(lt.M)},
               {"beta_lo", to_i64(lt.beta_lo)},  {"beta_hi", to_i64(lt.beta_hi)}};
        if (lt.eta_prime) l["eta_prime"] = rat_to_json(*lt.eta_prime);
        if (lt.mu_prime) l["mu_prime"] = rat_to_json(*lt.mu_prime);
        levels.push_back(std::move(l));
    }
    return json{{"levels", std::move(levels)}};
}

inline GeneratorTrace trace_from_json(const json& j) {
    GeneratorTrace tr;
    for (const auto& l : j.at("levels")) {
        LevelTrace lt;
        lt.gamma = rat_from_json(l.at("gamma"));
        lt.delta = rat_from_json(l.at("delta"));
        lt.k = Int(l.at("k").get<int64_t>());
        lt.eta = rat_from_json(l.at("eta"));
        lt.mu = rat_from_json(l.at("mu"));
        lt.M = Int(l.at("M").get<int64_t>());
        lt.beta_lo = Int(l.at("beta_lo").get<int64_t>());
        lt.beta_hi = Int(l.at("beta_hi").get<int64_t>());
        if (l.contains("eta_prime")) lt.eta_prime = rat_from_json(l.at("eta_prime"));
        if (l.contains("mu_prime")) lt.mu_prime = rat_from_json(l.at("mu_prime"));
        tr.levels.push_back(std::move(lt));
    }
    return tr;
}

inline json instance_to_json(const KnapsackInstance& inst) {
    json j{{"version", 1},
           {"n", inst.n},
           {"a", intvec_to_json(inst.a)},
           {"beta_lo", to_i64(inst.beta_lo)},
           {"beta_hi", to_i64(inst.beta_hi)}};
    if (inst.provenance) {
        const CascadeStructure& s = inst.provenance->structure;
        json p = json::array();
        for (const IntVec& pi : s.p) p.push_back(intvec_to_json(pi));
        json m = json::array();
        for (const Int& x : s.M) m.push_back(to_i64(x));
        json k = json::array();
        for (const Int& x : s.k) k.push_back(to_i64(x));
        json prov{{"t", s.t()},       {"p", std::move(p)},
                  {"r", intvec_to_json(s.r)}, {"M", std::move(m)},
                  {"k", std::move(k)},        {"variant", json{{"targets", s.targets}}}};
        if (inst.provenance->trace) prov["trace"] = trace_to_json(*inst.provenance->trace);
        j["provenance"] = std::move(prov);
    }
    return j;
}

inline KnapsackInstance instance_from_json(const json& j) {
    if (j.at("version").get<int>() != 1) throw std::runtime_error("parse: unsupported version");
    KnapsackInstance inst;
    inst.n = j.at("n").get<int>();
    inst.a = intvec_from_json(j.at("a"));
    inst.beta_lo = Int(j.at("beta_lo").get<int64_t>());
    inst.beta_hi = Int(j.at("beta_hi").get<int64_t>());
    if (static_cast<int>(inst.a.size()) != inst.n) throw std::runtime_error("parse: a length != n");
    if (inst.beta_lo > inst.beta_hi) throw std::runtime_error("parse: beta_lo > beta_hi");
    if (j.contains("provenance")) {
        const json& pv = j.at("provenance");
        CascadeStructure s;
        for (const auto& pi : pv.at("p")) s.p.push_back(intvec_from_json(pi));
        s.r = intvec_from_json(pv.at("r"));
        for (const auto& x : pv.at("M")) s.M.emplace_back(x.get<int64_t>());
        for (const auto& x : pv.at("k")) s.k.emplace_back(x.get<int64_t>());
        s.targets = pv.at("variant").at("targets").get<std::vector<int>>();
        if (pv.at("t").get<int>() != s.t()) throw std::runtime_error("parse: t mismatch");
        validate_structure(s);
        Provenance prov{std::move(s), std::nullopt};
        if (pv.contains("trace")) prov.trace = trace_from_json(pv.at("trace"));
        inst.provenance = std::move(prov);
    }
    return inst;
}

inline json matrix_to_json(const IntMat& m) {
    json rows = json::array();
    for (size_t i = 0; i < m.rows; ++i) rows.push_back(intvec_to_json(m.row(i)));
    return rows;
}

inline IntMat matrix_from_json(const json& j) {
    std::vector<IntVec> rows;
    for (const auto& r : j) rows.push_back(intvec_from_json(r));
    return IntMat::from_rows(rows);
}

// Reformulated instances share the instance format plus a "reformulation" block:
// U row-major, the reduced rows A*U, and the stacked row bounds
// b' = (beta_lo, 0...0), b = (beta_hi, 1...1).
inline json reformulation_to_json(const ReformulatedInstance& ref) {
    json j = instance_to_json(ref.base);
    json blo = json::array(), bhi = json::array();
    blo.push_back(to_i64(ref.base.beta_lo));
    bhi.push_back(to_i64(ref.base.beta_hi));
    for (int i = 0; i < ref.base.n; ++i) {
        blo.push_back(0);
        bhi.push_back(1);
    }
    j["reformulation"] = json{{"delta", rat_to_json(ref.delta)},
                              {"U", matrix_to_json(ref.transform)},
                              {"rows", matrix_to_json(ref.reform_rows)},
                              {"b_lo", std::move(blo)},
                              {"b_hi", std::move(bhi)}};
    return j;
}

inline ReformulatedInstance reformulation_from_json(const json& j) {
    ReformulatedInstance ref;
    ref.base = instance_from_json(j);
    const json& rj = j.at("reformulation");
    ref.delta = rat_from_json(rj.at("delta"));
    ref.transform = matrix_from_json(rj.at("U"));
    ref.transform_inv = inverse_unimodular(ref.transform);
    ref.reform_rows = matrix_from_json(rj.at("rows"));
    IntMat a = build_stacked(ref.base);
    if (mul(a, ref.transform) != ref.reform_rows)
        throw std::runtime_error("parse: reformulation rows do not match A*U");
    IntVec blo = intvec_from_json(rj.at("b_lo")), bhi = intvec_from_json(rj.at("b_hi"));
    if (blo.size() != a.rows || bhi.size() != a.rows || blo[0] != ref.base.beta_lo ||
        bhi[0] != ref.base.beta_hi)
        throw std::runtime_error("parse: reformulation bounds do not match the instance");
    for (size_t i = 1; i < blo.size(); ++i)
        if (blo[i] != 0 || bhi[i] != 1)
            throw std::runtime_error("parse: reformulation box bounds must be 0/1");
    for (size_t c = 0; c < a.cols; ++c) {
        ref.col_norms_before.push_back(col_norm_sq(a, c));
        ref.col_norms_after.push_back(col_norm_sq(ref.reform_rows, c));
    }
    return ref;
}

// Canonical serialization: sorted keys (nlohmann default), two-space indent,
// trailing newline. parse(dump(x)) == x and dump is a fixed point.
inline std::string canonical_dump(const json& j) { return j.dump(2) + "\n"; }

inline void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << canonical_dump(j);
    if (!out) throw std::runtime_error("write failed: " + path);
}

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    json j;
    in >> j;
    return j;
}

}  // namespace ckp
