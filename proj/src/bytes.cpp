// Copyright 2026 The movsc Authors
// SPDX-License-Identifier: Apache-2.0

#include "movsc/bytes.hpp"

#include "movsc/error.hpp"

namespace movsc {

std::string to_hex(ByteView bytes) {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (uint8_t b : bytes) {
        out.push_back(kDigits[b >> 4]);
        out.push_back(kDigits[b & 0x0f]);
    }
    return out;
}

namespace {
    int nibble(char c) {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        return -1;
    }
}  // namespace

std::optional<Bytes> from_hex(std::string_view hex) {
    if (hex.starts_with("0x") || hex.starts_with("0X")) hex.remove_prefix(2);
    if (hex.size() % 2 != 0) return std::nullopt;
    Bytes out(hex.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i) {
        int hi = nibble(hex[2 * i]);
        int lo = nibble(hex[2 * i + 1]);
        if (hi < 0 || lo < 0) return std::nullopt;
        out[i] = static_cast<uint8_t>((hi << 4) | lo);
    }
    return out;
}

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::kBadSignature: return "BadSignature";
        case ErrorCode::kBadNonce: return "BadNonce";
        case ErrorCode::kDuplicateAddress: return "DuplicateAddress";
        case ErrorCode::kUnknownAddress: return "UnknownAddress";
        case ErrorCode::kMalformedData: return "MalformedData";
        case ErrorCode::kUnsupportedAlgorithm: return "UnsupportedAlgorithm";
        case ErrorCode::kEntropyUnavailable: return "EntropyUnavailable";
        case ErrorCode::kDecryptFailure: return "DecryptFailure";
        case ErrorCode::kIntegrityMismatch: return "IntegrityMismatch";
        case ErrorCode::kUnsupportedSource: return "UnsupportedSource";
        case ErrorCode::kFetchFailure: return "FetchFailure";
        case ErrorCode::kExecutionTimeout: return "ExecutionTimeout";
        case ErrorCode::kNotFound: return "NotFound";
        case ErrorCode::kAccessDenied: return "AccessDenied";
        case ErrorCode::kStorageFull: return "StorageFull";
        case ErrorCode::kSecretStoreFailure: return "SecretStoreFailure";
        case ErrorCode::kScenarioPanic: return "ScenarioPanic";
        case ErrorCode::kIoFailure: return "IoFailure";
    }
    return "Unknown";
}

}  // namespace movsc
