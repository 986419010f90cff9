// Copyright 2026 The movsc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "movsc/bytes.hpp"
#include "movsc/crypto.hpp"

namespace movsc {

//! Local secret state of one certificate. `pending` holds a freshly drawn
//! preimage while the call that installs its commitment is in flight, so a
//! crash between submission and bookkeeping leaves both candidates on disk.
struct SecretRecord {
    crypto::SecretPreimage current;
    std::optional<crypto::SecretPreimage> pending;

    friend bool operator==(const SecretRecord&, const SecretRecord&) = default;
};

class SecretStore {
  public:
    virtual ~SecretStore() = default;

    virtual std::optional<SecretRecord> get(const Hash32& data_hash) const = 0;
    virtual void set(const Hash32& data_hash, const SecretRecord& record) = 0;
    virtual void erase(const Hash32& data_hash) = 0;
    virtual std::vector<Hash32> keys() const = 0;
};

class MemorySecretStore final : public SecretStore {
  public:
    std::optional<SecretRecord> get(const Hash32& data_hash) const override;
    void set(const Hash32& data_hash, const SecretRecord& record) override;
    void erase(const Hash32& data_hash) override;
    std::vector<Hash32> keys() const override;

  private:
    mutable std::mutex mu_;
    std::map<Hash32, SecretRecord> records_;
};

//! Cost parameters of the passphrase KDF (Argon2id).
struct KdfLimits {
    unsigned long long ops;
    std::size_t mem;

    static KdfLimits interactive();
    //! Cheapest admissible setting, for tests.
    static KdfLimits minimum();
};

//! Secret store persisted as one encrypted file. The file holds a KDF salt and
//! a secretbox of the serialized records; every mutation rewrites it through
//! a temporary file and an atomic rename. An exclusive lock on `<path>.lock`
//! is held for the lifetime of the object, so two processes cannot interleave
//! rotations. Throws kSecretStoreFailure on a wrong passphrase or corrupt file.
class FileSecretStore final : public SecretStore {
  public:
    FileSecretStore(std::filesystem::path path, std::string_view passphrase, crypto::Rng& rng,
                    KdfLimits limits = KdfLimits::interactive());
    ~FileSecretStore() override;
    FileSecretStore(const FileSecretStore&) = delete;
    FileSecretStore& operator=(const FileSecretStore&) = delete;

    std::optional<SecretRecord> get(const Hash32& data_hash) const override;
    void set(const Hash32& data_hash, const SecretRecord& record) override;
    void erase(const Hash32& data_hash) override;
    std::vector<Hash32> keys() const override;

  private:
    void load(std::string_view passphrase, KdfLimits limits);
    void persist() const;

    std::filesystem::path path_;
    crypto::Rng& rng_;
    int lock_fd_{-1};
    Bytes salt_;
    uint64_t kdf_ops_{0};
    uint64_t kdf_mem_{0};
    Hash32 key_;
    mutable std::mutex mu_;
    std::map<Hash32, SecretRecord> records_;
};

}  // namespace movsc
