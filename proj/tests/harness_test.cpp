// Copyright 2026 The movsc Authors
// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include "movsc/error.hpp"
#include "movsc/harness.hpp"
#include "support/lifecycle.hpp"

namespace movsc {

namespace {

    nlohmann::json minimal() {
        return nlohmann::json::parse(R"({
            "name": "minimal",
            "seed": 5,
            "actors": [{"name": "alice", "role": "client"}],
            "blobs": [{"name": "b", "size": 100}],
            "steps": [
                {"action": "register_code", "actor": "alice", "builtins": true},
                {"action": "certify", "actor": "alice", "blob": "b", "code": "SHA256"}
            ],
            "expect": [{"cert": "b", "status": "certified"}, {"chain_valid": true}]
        })");
    }

}  // namespace

TEST_CASE("builtin scenarios pass") {
    auto paths = builtin_scenarios();
    REQUIRE(paths.size() >= 10);
    std::set<ContractError> errors;
    std::set<std::string> statuses;
    for (const auto& path : paths) {
        auto report = run_scenario(Scenario::load(path));
        CAPTURE(report.name);
        for (const auto& p : report.predicates) {
            CAPTURE(p.name, p.detail);
            CHECK(p.passed);
        }
        CHECK_FALSE(report.panic);
        CHECK(report.passed());
        errors.insert(report.errors_seen.begin(), report.errors_seen.end());
        auto reached = test::statuses_reached(report.chain);
        statuses.insert(reached.begin(), reached.end());
    }
    CHECK(errors == std::set<ContractError>(std::begin(kAllContractErrors), std::end(kAllContractErrors)));
    CHECK(statuses == std::set<std::string>{"certified", "validated", "published", "shared", "withdrawn"});
}

TEST_CASE("runs are reproducible from the seed") {
    auto scenario = Scenario::load(builtin_scenario_dir() / "happy_path.json");
    auto a = run_scenario(scenario);
    auto b = run_scenario(scenario);
    CHECK(a.chain == b.chain);
    CHECK(a.state == b.state);
    CHECK(a.trace == b.trace);

    auto c = run_scenario(scenario, {.seed = scenario.seed + 1});
    CHECK(c.passed());
    CHECK(c.chain != a.chain);
}

TEST_CASE("final state equals a replay of the exported chain") {
    auto report = run_scenario(Scenario::load(builtin_scenario_dir() / "private_share.json"));
    REQUIRE(report.passed());
    CHECK(verify_chain_bytes(report.chain));
    CHECK(WorldState::replay(decode_chain(report.chain)).serialize() == report.state);
}

TEST_CASE("malformed scenarios are refused") {
    auto code_of = [](nlohmann::json j) {
        try {
            run_scenario(Scenario::from_json(j));
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::kIoFailure;
    };
    auto no_steps = minimal();
    no_steps.erase("steps");
    CHECK(code_of(no_steps) == ErrorCode::kMalformedData);
    auto bad_seed = minimal();
    bad_seed["seed"] = "five";
    CHECK(code_of(bad_seed) == ErrorCode::kMalformedData);
    CHECK_THROWS_AS(Scenario::load("/nonexistent/scenario.json"), Error);
}

TEST_CASE("predicates and step expectations are enforced") {
    REQUIRE(run_scenario(Scenario::from_json(minimal())).passed());

    auto wrong_status = minimal();
    wrong_status["expect"][0]["status"] = "validated";
    auto r1 = run_scenario(Scenario::from_json(wrong_status));
    CHECK_FALSE(r1.passed());
    CHECK(std::any_of(r1.predicates.begin(), r1.predicates.end(),
                      [](const Predicate& p) { return !p.passed && p.name.find("\"cert\"") != std::string::npos; }));

    auto wrong_expect = minimal();
    wrong_expect["steps"][1]["expect"] = "AlreadyCertified";
    CHECK_FALSE(run_scenario(Scenario::from_json(wrong_expect)).passed());

    auto anticipated = minimal();
    anticipated["steps"].push_back(
        {{"action", "certify"}, {"actor", "alice"}, {"blob", "b"}, {"code", "SHA256"}, {"expect", "AlreadyCertified"}});
    auto r2 = run_scenario(Scenario::from_json(anticipated));
    CHECK(r2.passed());
    CHECK(r2.errors_seen.contains(ContractError::kAlreadyCertified));
}

TEST_CASE("unanticipated failures abort the run") {
    auto s = minimal();
    s["steps"].push_back({{"action", "tamper"}, {"actor", "alice"}, {"blob", "nope"}});
    s["steps"].push_back({{"action", "withdraw"}, {"actor", "alice"}, {"blob", "b"}});
    auto report = run_scenario(Scenario::from_json(s));
    CHECK(report.panic.has_value());
    CHECK_FALSE(report.passed());
    CHECK(report.to_json().at("panic").is_string());
}

TEST_CASE("http transport gives the same verdicts") {
    auto report = run_scenario(Scenario::load(builtin_scenario_dir() / "encrypted_validation.json"), {.http = true});
    CHECK(report.passed());
}

}  // namespace movsc
