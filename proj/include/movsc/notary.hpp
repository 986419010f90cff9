// Copyright 2026 The movsc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <stop_token>
#include <string>
#include <vector>

#include <json.hpp>

#include "movsc/access_node.hpp"
#include "movsc/codeexec.hpp"
#include "movsc/datastore.hpp"

namespace movsc {

enum class DishonestMode {
    kHonest,
    //! Reports the certified hash without looking at the data.
    kValidateBlind,
    //! Reports a digest that cannot match.
    kInvalidateOnPurpose,
};

std::string_view to_string(DishonestMode m);
std::optional<DishonestMode> dishonest_mode_from_string(std::string_view name);

struct ProcessingOutcome {
    enum class Kind { kMatched, kMismatched, kFailed };

    Kind kind{Kind::kFailed};
    uint64_t seq{0};
    Hash32 data_hash;
    std::optional<Hash32> digest;
    std::optional<ErrorCode> failure;
    std::optional<ContractError> contract_error;
    std::string detail;

    nlohmann::json to_json() const;
};

std::string_view to_string(ProcessingOutcome::Kind k);

//! Append-only record of everything a daemon did. In memory, optionally
//! mirrored to a newline-delimited JSON file.
class AuditLog {
  public:
    //! Mirrors subsequent entries to path (appending).
    void open(const std::filesystem::path& path);

    void append(nlohmann::json entry);
    std::vector<nlohmann::json> entries() const;

  private:
    mutable std::mutex mu_;
    std::vector<nlohmann::json> entries_;
    std::optional<std::ofstream> file_;
};

struct NotaryOptions {
    std::chrono::milliseconds poll_interval{2000};
    codeexec::ExecutionOptions execution;
    DishonestMode mode{DishonestMode::kHonest};
    //! Dishonest modes refuse to run unless this is set.
    bool simulation{false};
    //! Packages processed concurrently per poll.
    std::size_t workers{1};
    std::optional<std::filesystem::path> audit_path;
};

//! Notary agent, also used by peers for privately shared packages: polls
//! for packages addressed to its identity, decrypts their references,
//! accepts them, runs the contract-provided code over the data and reports
//! the digest. Infrastructure failures are logged and never reported.
class NotaryDaemon {
  public:
    NotaryDaemon(AccessNode& node, Identity identity, const DataFetcher& fetcher, NotaryOptions options = {});

    const Identity& identity() const { return identity_; }
    Address address() const { return identity_.address(); }
    const AuditLog& audit() const { return audit_; }

    Receipt register_as_notary();

    ProcessingOutcome process_one(const ValidatorPackage& vp);
    //! Processes every open package addressed to this identity once.
    std::vector<ProcessingOutcome> run_once();
    void run_loop(std::stop_token stop);

    //! Recomputes a public package and confirms it on chain.
    ProcessingOutcome confirm_public(const ValidatorPackage& vp);

  private:
    struct Reference {
        std::string url;
        std::string password;
    };

    Reference open_reference(const ValidatorPackage& vp) const;
    Hash32 compute(const CodeEntry& entry, const std::string& url, const std::string& password) const;
    ProcessingOutcome fail(const ValidatorPackage& vp, std::string action, ErrorCode code, std::string detail);
    void log(const ValidatorPackage& vp, std::string_view action, nlohmann::json extra = {});

    AccessNode& node_;
    Identity identity_;
    const DataFetcher& fetcher_;
    NotaryOptions options_;
    AuditLog audit_;
    std::mutex failed_mu_;
    std::set<uint64_t> given_up_;
};

}  // namespace movsc
