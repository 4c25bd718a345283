#include "ckp/io.hpp"

#include "ckp/bnb.hpp"
#include "ckp/generator.hpp"
#include "test_helpers.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <functional>

using namespace ckp;
using namespace ckp::testing;

TEST_CASE("instance round-trip is canonical and byte-identical") {
    GenResult g = generate_ckp(p1_vec(), p2_vec(), r_vec());
    const auto& inst = std::get<KnapsackInstance>(g);
    json j = instance_to_json(inst);
    std::string s1 = canonical_dump(j);
    json back = json::parse(s1);
    CHECK(back == j);
    CHECK(canonical_dump(back) == s1);
    KnapsackInstance inst2 = instance_from_json(back);
    CHECK(inst2.a == inst.a);
    CHECK(inst2.beta_lo == inst.beta_lo);
    CHECK(inst2.beta_hi == inst.beta_hi);
    REQUIRE(inst2.provenance);
    CHECK(inst2.provenance->structure.M == inst.provenance->structure.M);
    CHECK(inst2.provenance->structure.k == inst.provenance->structure.k);
    REQUIRE(inst2.provenance->trace);
    CHECK(inst2.provenance->trace->levels.size() == 2);
    CHECK(inst2.provenance->trace->levels[1].eta == 4);
}

TEST_CASE("rationals persist as integer pairs, never floats") {
    json j = rat_to_json(Rat(-7, 3));
    REQUIRE(j.is_array());
    CHECK(j[0] == -7);
    CHECK(j[1] == 3);
    CHECK(rat_from_json(j) == Rat(-7, 3));
    std::function<void(const json&)> walk = [&](const json& v) {
        CHECK(!v.is_number_float());
        if (v.is_object())
            for (const auto& [k, sub] : v.items()) walk(sub);
        else if (v.is_array())
            for (const auto& sub : v) walk(sub);
    };
    walk(instance_to_json(kp1()));
}

TEST_CASE("bundled fixtures parse and match the transcribed coefficients") {
    std::string dir = CKP_FIXTURE_DIR;
    auto k1 = instance_from_json(read_json_file(dir + "/kp1.json"));
    CHECK(k1.a == kp1().a);
    CHECK(k1.beta_lo == 1023);
    REQUIRE(k1.provenance);
    REQUIRE(k1.provenance->trace);
    auto k2 = instance_from_json(read_json_file(dir + "/kp2.json"));
    CHECK(k2.a == kp2().a);
    CHECK(k2.provenance->structure.M == std::vector<Int>{62, 10});
    auto k3 = instance_from_json(read_json_file(dir + "/kp3.json"));
    CHECK(k3.a == kp3().a);
    auto k4 = instance_from_json(read_json_file(dir + "/kp4.json"));
    CHECK(k4.a == kp4().a);
    CHECK(k4.provenance->structure.M == std::vector<Int>{572, 97, 11});
    for (const char* name : {"/kp1.json", "/kp2.json", "/kp3.json", "/kp4.json"}) {
        std::ifstream in(dir + name);
        std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        CHECK(canonical_dump(json::parse(text)) == text);
    }
}

TEST_CASE("reformulation block round-trip rejects tampering") {
    auto ref = reformulate(kp1());
    json j = reformulation_to_json(ref);
    auto back = reformulation_from_json(j);
    CHECK(back.transform == ref.transform);
    CHECK(back.reform_rows == ref.reform_rows);
    json bad = j;
    bad["reformulation"]["rows"][0][0] = 12345;
    CHECK_THROWS_AS(reformulation_from_json(bad), std::runtime_error);
}

TEST_CASE("parse rejects malformed instances") {
    json j = instance_to_json(kp1());
    json bad = j;
    bad["beta_lo"] = 2000;  // now beta_lo > beta_hi
    CHECK_THROWS_AS(instance_from_json(bad), std::runtime_error);
    bad = j;
    bad["a"].erase(0);
    CHECK_THROWS_AS(instance_from_json(bad), std::runtime_error);
    bad = j;
    bad["version"] = 9;
    CHECK_THROWS_AS(instance_from_json(bad), std::runtime_error);
}

TEST_CASE("serialize, parse and re-solve yields the identical outcome") {
    auto res = generate_cascade(10, 2, 3);
    auto* ok = std::get_if<CascadeSuccess>(&res);
    REQUIRE(ok);
    KnapsackInstance parsed = instance_from_json(json::parse(canonical_dump(instance_to_json(ok->instance))));
    HyperplaneSequence hs;
    for (const auto& p : parsed.provenance->structure.p) hs.directions.push_back(p);
    BnbOutcome direct = solve(ok->instance, BranchStrategy{hs});
    BnbOutcome reparsed = solve(parsed, BranchStrategy{hs});
    CHECK(direct.status == reparsed.status);
    CHECK(direct.nodes_created == reparsed.nodes_created);
    CHECK(direct.nodes_lp_solved == reparsed.nodes_lp_solved);
    CHECK(dump_tree(direct) == dump_tree(reparsed));
}

TEST_CASE("file io errors are reported") {
    CHECK_THROWS_AS(read_json_file("/nonexistent/nowhere.json"), std::runtime_error);
}
