// Copyright 2026 The movsc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "movsc/bytes.hpp"
#include "movsc/encoding.hpp"

namespace movsc {

//! Argument or return value of a contract call.
using Value = std::variant<std::monostate, bool, uint64_t, std::string, Bytes>;

void encode_value(Writer& w, const Value& v);
Value decode_value(Reader& r);
nlohmann::json value_to_json(const Value& v);

struct ContractCall {
    std::string op;
    std::vector<Value> args;

    void encode(Writer& w) const;
    static ContractCall decode(Reader& r);
    nlohmann::json to_json() const;

    friend bool operator==(const ContractCall&, const ContractCall&) = default;
};

enum class ContractError : uint8_t {
    kMalformedCall = 1,
    kAlreadyCertified,
    kUnknownCodeId,
    kDuplicateCodeId,
    kIntegrityMismatch,
    kNotANotaryIdentity,
    kDuplicateNotary,
    kNotCertified,
    kWrongSecret,
    kUnknownNotary,
    kWithdrawn,
    kRetryLimitExceeded,
    kNotRequestedNotary,
    kNotAccepted,
    kNoPublicPackage,
    kUnknownPeer,
    kAlreadyWithdrawn,
};

inline constexpr ContractError kAllContractErrors[] = {
    ContractError::kMalformedCall,     ContractError::kAlreadyCertified,   ContractError::kUnknownCodeId,
    ContractError::kDuplicateCodeId,   ContractError::kIntegrityMismatch,  ContractError::kNotANotaryIdentity,
    ContractError::kDuplicateNotary,   ContractError::kNotCertified,       ContractError::kWrongSecret,
    ContractError::kUnknownNotary,     ContractError::kWithdrawn,          ContractError::kRetryLimitExceeded,
    ContractError::kNotRequestedNotary, ContractError::kNotAccepted,       ContractError::kNoPublicPackage,
    ContractError::kUnknownPeer,       ContractError::kAlreadyWithdrawn,
};

std::string_view to_string(ContractError e);
std::optional<ContractError> contract_error_from_string(std::string_view name);

//! Outcome of applying one call. A failed call still produces a result
//! (and is still recorded on the ledger).
struct CallResult {
    std::optional<ContractError> error;
    Value value;

    bool ok() const { return !error.has_value(); }
    static CallResult success(Value v = {}) { return {std::nullopt, std::move(v)}; }
    static CallResult failure(ContractError e) { return {e, {}}; }

    void encode(Writer& w) const;
    static CallResult decode(Reader& r);
    nlohmann::json to_json() const;

    friend bool operator==(const CallResult&, const CallResult&) = default;
};

//! Builds a ContractCall from typed arguments.
class CallBuilder {
  public:
    explicit CallBuilder(std::string op) { call_.op = std::move(op); }

    CallBuilder& arg(bool v) { return push(Value{v}); }
    CallBuilder& arg(uint64_t v) { return push(Value{v}); }
    CallBuilder& arg(std::string v) { return push(Value{std::move(v)}); }
    CallBuilder& arg(const char* v) { return push(Value{std::string{v}}); }
    CallBuilder& arg(Bytes v) { return push(Value{std::move(v)}); }
    template <std::size_t N, class Tag>
    CallBuilder& arg(const FixedBytes<N, Tag>& v) {
        return push(Value{v.to_vector()});
    }
    CallBuilder& none() { return push(Value{}); }

    ContractCall build() { return std::move(call_); }

  private:
    CallBuilder& push(Value v) {
        call_.args.push_back(std::move(v));
        return *this;
    }
    ContractCall call_;
};

}  // namespace movsc
