// Copyright 2026 The movsc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace movsc {

//! Failures raised outside the contract state machine. Contract-level
//! rejections travel inside receipts instead (see ContractError).
enum class ErrorCode {
    kBadSignature,
    kBadNonce,
    kDuplicateAddress,
    kUnknownAddress,
    kMalformedData,
    kUnsupportedAlgorithm,
    kEntropyUnavailable,
    kDecryptFailure,
    kIntegrityMismatch,
    kUnsupportedSource,
    kFetchFailure,
    kExecutionTimeout,
    kNotFound,
    kAccessDenied,
    kStorageFull,
    kSecretStoreFailure,
    kScenarioPanic,
    kIoFailure,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_{code} {}
    explicit Error(ErrorCode code) : Error(code, std::string{to_string(code)}) {}

    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

}  // namespace movsc
