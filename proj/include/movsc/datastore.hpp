// Copyright 2026 The movsc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <thread>

#include "movsc/bytes.hpp"
#include "movsc/codeexec.hpp"
#include "movsc/crypto.hpp"

namespace httplib {
class Server;
}

namespace movsc {

//! HTTP header carrying the object password on the loopback channel.
inline constexpr const char* kPasswordHeader = "X-Movsc-Password";

struct Mutation {
    enum class Kind { kIdentity, kFlipByte, kTruncate, kAppend };
    Kind kind{Kind::kIdentity};
    //! Byte to flip, or new length for kTruncate.
    uint64_t offset{0};
    uint8_t mask{0x01};
};

//! Credential-protected off-chain object store. Objects are addressed by an
//! unguessable token and released only against their exact password.
class DataStore {
  public:
    explicit DataStore(crypto::Rng& rng, uint64_t capacity_bytes = uint64_t{8} << 30, bool simulation = true);

    //! Returns the object's token (256 random bits, hex). Throws kStorageFull.
    std::string put(Bytes content, std::string_view password);
    //! Throws kNotFound / kAccessDenied.
    Bytes retrieve(std::string_view token, std::string_view password) const;
    //! Streams a snapshot of the object.
    std::unique_ptr<codeexec::ByteSource> open(std::string_view token, std::string_view password) const;
    //! Harness-only corruption of a stored object.
    void tamper(std::string_view token, const Mutation& mutation);

    static std::string url_for(std::string_view token) { return "mem://" + std::string{token}; }
    uint64_t used_bytes() const;

  private:
    struct Object {
        Hash32 password_digest;
        std::shared_ptr<const Bytes> content;
    };

    std::shared_ptr<const Bytes> snapshot(std::string_view token, std::string_view password) const;

    crypto::Rng& rng_;
    uint64_t capacity_;
    bool simulation_;
    mutable std::shared_mutex mu_;
    std::map<std::string, Object, std::less<>> objects_;
    uint64_t used_{0};
};

//! Serves a DataStore on loopback: GET /objects/<token> with the password in
//! the X-Movsc-Password header; 404 unknown token, 403 wrong password.
class DataStoreServer {
  public:
    explicit DataStoreServer(const DataStore& store, std::string host = "127.0.0.1");
    ~DataStoreServer();
    DataStoreServer(const DataStoreServer&) = delete;
    DataStoreServer& operator=(const DataStoreServer&) = delete;

    int port() const { return port_; }
    std::string url_for(std::string_view token) const;

  private:
    const DataStore& store_;
    std::string host_;
    std::unique_ptr<httplib::Server> server_;
    std::thread thread_;
    int port_{0};
};

//! Resolves data URLs: mem://<token> (attached store), http://host:port/...,
//! and file://<path> (password ignored).
class DataFetcher {
  public:
    DataFetcher() = default;
    explicit DataFetcher(const DataStore* store) : store_{store} {}

    //! Throws kNotFound / kAccessDenied / kFetchFailure.
    std::unique_ptr<codeexec::ByteSource> open(const std::string& url, std::string_view password) const;
    Bytes fetch(const std::string& url, std::string_view password) const;

  private:
    const DataStore* store_{nullptr};
};

}  // namespace movsc
