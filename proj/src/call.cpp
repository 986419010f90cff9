// Copyright 2026 The movsc Authors
// SPDX-License-Identifier: Apache-2.0

#include "movsc/call.hpp"

#include <array>

#include "movsc/error.hpp"

namespace movsc {

namespace {

    enum class ValueTag : uint8_t { kNone = 0, kBool = 1, kU64 = 2, kString = 3, kBytes = 4 };

    constexpr std::array<std::string_view, 18> kErrorNames{
        "",
        "MalformedCall",
        "AlreadyCertified",
        "UnknownCodeId",
        "DuplicateCodeId",
        "IntegrityMismatch",
        "NotANotaryIdentity",
        "DuplicateNotary",
        "NotCertified",
        "WrongSecret",
        "UnknownNotary",
        "Withdrawn",
        "RetryLimitExceeded",
        "NotRequestedNotary",
        "NotAccepted",
        "NoPublicPackage",
        "UnknownPeer",
        "AlreadyWithdrawn",
    };

}  // namespace

void encode_value(Writer& w, const Value& v) {
    std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, std::monostate>) {
                w.u8(static_cast<uint8_t>(ValueTag::kNone));
            } else if constexpr (std::is_same_v<T, bool>) {
                w.u8(static_cast<uint8_t>(ValueTag::kBool)).boolean(x);
            } else if constexpr (std::is_same_v<T, uint64_t>) {
                w.u8(static_cast<uint8_t>(ValueTag::kU64)).u64(x);
            } else if constexpr (std::is_same_v<T, std::string>) {
                w.u8(static_cast<uint8_t>(ValueTag::kString)).str(x);
            } else {
                w.u8(static_cast<uint8_t>(ValueTag::kBytes)).bytes(x);
            }
        },
        v);
}

Value decode_value(Reader& r) {
    switch (static_cast<ValueTag>(r.u8())) {
        case ValueTag::kNone: return std::monostate{};
        case ValueTag::kBool: return r.boolean();
        case ValueTag::kU64: return r.u64();
        case ValueTag::kString: return r.str();
        case ValueTag::kBytes: return r.bytes();
    }
    throw Error{ErrorCode::kMalformedData, "unknown value tag"};
}

nlohmann::json value_to_json(const Value& v) {
    return std::visit(
        [](const auto& x) -> nlohmann::json {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, std::monostate>) {
                return nullptr;
            } else if constexpr (std::is_same_v<T, Bytes>) {
                return to_hex(x);
            } else {
                return x;
            }
        },
        v);
}

void ContractCall::encode(Writer& w) const {
    w.str(op).u32(static_cast<uint32_t>(args.size()));
    for (const auto& a : args) encode_value(w, a);
}

ContractCall ContractCall::decode(Reader& r) {
    ContractCall c;
    c.op = r.str();
    uint32_t n = r.u32();
    if (n > r.remaining()) throw Error{ErrorCode::kMalformedData, "argument count exceeds input"};
    c.args.reserve(n);
    for (uint32_t i = 0; i < n; ++i) c.args.push_back(decode_value(r));
    return c;
}

nlohmann::json ContractCall::to_json() const {
    nlohmann::json j{{"op", op}, {"args", nlohmann::json::array()}};
    for (const auto& a : args) j["args"].push_back(value_to_json(a));
    return j;
}

std::string_view to_string(ContractError e) {
    auto i = static_cast<std::size_t>(e);
    return i < kErrorNames.size() ? kErrorNames[i] : "Unknown";
}

std::optional<ContractError> contract_error_from_string(std::string_view name) {
    for (auto e : kAllContractErrors) {
        if (to_string(e) == name) return e;
    }
    return std::nullopt;
}

void CallResult::encode(Writer& w) const {
    w.u8(error ? static_cast<uint8_t>(*error) : 0);
    encode_value(w, value);
}

CallResult CallResult::decode(Reader& r) {
    CallResult out;
    uint8_t code = r.u8();
    if (code != 0) {
        if (code >= kErrorNames.size()) throw Error{ErrorCode::kMalformedData, "unknown error code"};
        out.error = static_cast<ContractError>(code);
    }
    out.value = decode_value(r);
    return out;
}

nlohmann::json CallResult::to_json() const {
    nlohmann::json j{{"ok", ok()}, {"value", value_to_json(value)}};
    if (error) j["error"] = to_string(*error);
    return j;
}

}  // namespace movsc
