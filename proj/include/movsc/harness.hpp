// Copyright 2026 The movsc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "movsc/bytes.hpp"
#include "movsc/call.hpp"

namespace movsc {

//! A scripted multi-party run. Scripts are data; see scenarios/*.json and
//! docs/scenarios.md for the action and predicate vocabulary.
struct Scenario {
    std::string name;
    std::string description;
    uint64_t seed{1};
    nlohmann::json actors;
    nlohmann::json blobs;
    nlohmann::json steps;
    nlohmann::json expect;

    //! Throws kMalformedData if a required field is missing or mistyped.
    static Scenario from_json(const nlohmann::json& j);
    static Scenario load(const std::filesystem::path& path);
};

struct Predicate {
    std::string name;
    bool passed{false};
    std::string detail;
};

struct ScenarioReport {
    std::string name;
    uint64_t seed{0};
    std::vector<Predicate> predicates;
    nlohmann::json trace = nlohmann::json::array();
    //! Every contract error recorded on chain during the run.
    std::set<ContractError> errors_seen;
    //! Set if an actor threw something the script did not anticipate.
    std::optional<std::string> panic;
    Bytes chain;
    Bytes state;
    //! Notary and peer audit logs, keyed by actor name.
    nlohmann::json audit = nlohmann::json::object();

    bool passed() const;
    nlohmann::json to_json() const;
};

struct HarnessOptions {
    //! Overrides the scenario's own seed.
    std::optional<uint64_t> seed;
    //! Serve data over the loopback HTTP server instead of mem:// URLs.
    //! Ports vary between runs, so chain exports are then not reproducible.
    bool http{false};
};

ScenarioReport run_scenario(const Scenario& scenario, const HarnessOptions& options = {});

//! Directory holding the builtin scenario suite.
std::filesystem::path builtin_scenario_dir();
//! The builtin suite, sorted by file name.
std::vector<std::filesystem::path> builtin_scenarios();

}  // namespace movsc
