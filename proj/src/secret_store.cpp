// Copyright 2026 The movsc Authors
// SPDX-License-Identifier: Apache-2.0

#include "movsc/secret_store.hpp"

#include <fcntl.h>
#include <sodium.h>
#include <sys/file.h>
#include <unistd.h>

#include <fstream>
#include <iterator>

#include "movsc/encoding.hpp"
#include "movsc/error.hpp"

namespace movsc {

namespace {

    constexpr std::string_view kFileMagic = "movsc-secrets/1";

    [[noreturn]] void fail(const std::string& what) { throw Error{ErrorCode::kSecretStoreFailure, what}; }

    Bytes encode_records(const std::map<Hash32, SecretRecord>& records) {
        Writer w;
        w.u32(static_cast<uint32_t>(records.size()));
        for (const auto& [hash, rec] : records) {
            w.fixed(hash);
            w.fixed(rec.current);
            w.boolean(rec.pending.has_value());
            if (rec.pending) w.fixed(*rec.pending);
        }
        return std::move(w).take();
    }

    std::map<Hash32, SecretRecord> decode_records(ByteView bytes) {
        Reader r{bytes};
        std::map<Hash32, SecretRecord> out;
        uint32_t n = r.u32();
        for (uint32_t i = 0; i < n; ++i) {
            auto hash = r.fixed<Hash32>();
            SecretRecord rec;
            rec.current = r.fixed<crypto::SecretPreimage>();
            if (r.boolean()) rec.pending = r.fixed<crypto::SecretPreimage>();
            out.emplace(hash, rec);
        }
        r.expect_end();
        return out;
    }

}  // namespace

std::optional<SecretRecord> MemorySecretStore::get(const Hash32& data_hash) const {
    std::lock_guard lock{mu_};
    auto it = records_.find(data_hash);
    if (it == records_.end()) return std::nullopt;
    return it->second;
}

void MemorySecretStore::set(const Hash32& data_hash, const SecretRecord& record) {
    std::lock_guard lock{mu_};
    records_[data_hash] = record;
}

void MemorySecretStore::erase(const Hash32& data_hash) {
    std::lock_guard lock{mu_};
    records_.erase(data_hash);
}

std::vector<Hash32> MemorySecretStore::keys() const {
    std::lock_guard lock{mu_};
    std::vector<Hash32> out;
    for (const auto& [k, v] : records_) out.push_back(k);
    return out;
}

// ---------------------------------------------------------------------------

KdfLimits KdfLimits::interactive() {
    return {crypto_pwhash_OPSLIMIT_INTERACTIVE, crypto_pwhash_MEMLIMIT_INTERACTIVE};
}

KdfLimits KdfLimits::minimum() { return {crypto_pwhash_OPSLIMIT_MIN, crypto_pwhash_MEMLIMIT_MIN}; }

FileSecretStore::FileSecretStore(std::filesystem::path path, std::string_view passphrase, crypto::Rng& rng,
                                 KdfLimits limits)
    : path_{std::move(path)}, rng_{rng} {
    crypto::ensure_initialized();
    auto lock_path = path_.string() + ".lock";
    lock_fd_ = ::open(lock_path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0600);
    if (lock_fd_ < 0) fail("cannot open lock file " + lock_path);
    if (::flock(lock_fd_, LOCK_EX) != 0) {
        ::close(lock_fd_);
        fail("cannot lock " + lock_path);
    }

    // The destructor does not run for a throwing constructor, so release the lock here.
    try {
        load(passphrase, limits);
    } catch (...) {
        ::close(lock_fd_);
        lock_fd_ = -1;
        throw;
    }
}

void FileSecretStore::load(std::string_view passphrase, KdfLimits limits) {
    // KDF limits are stored with the salt so a file stays readable after defaults change.
    Bytes sealed;
    uint64_t ops = limits.ops;
    uint64_t mem = limits.mem;
    if (std::filesystem::exists(path_)) {
        std::ifstream in{path_, std::ios::binary};
        Bytes image{std::istreambuf_iterator<char>{in}, {}};
        try {
            Reader r{image};
            if (r.str() != kFileMagic) fail("not a secret store: " + path_.string());
            ops = r.u64();
            mem = r.u64();
            salt_ = r.bytes();
            sealed = r.bytes();
            r.expect_end();
        } catch (const Error& e) {
            if (e.code() == ErrorCode::kSecretStoreFailure) throw;
            fail("corrupt secret store: " + path_.string());
        }
        if (salt_.size() != crypto_pwhash_SALTBYTES) fail("corrupt secret store salt");
    } else {
        salt_ = rng_.bytes(crypto_pwhash_SALTBYTES);
    }

    if (crypto_pwhash(key_.bytes.data(), Hash32::size, passphrase.data(), passphrase.size(), salt_.data(), ops,
                      static_cast<std::size_t>(mem), crypto_pwhash_ALG_ARGON2ID13) != 0) {
        fail("key derivation failed");
    }
    kdf_ops_ = ops;
    kdf_mem_ = mem;

    if (!sealed.empty()) {
        if (sealed.size() < crypto_secretbox_NONCEBYTES + crypto_secretbox_MACBYTES) fail("corrupt secret store");
        Bytes plain(sealed.size() - crypto_secretbox_NONCEBYTES - crypto_secretbox_MACBYTES);
        const uint8_t* nonce = sealed.data();
        const uint8_t* box = sealed.data() + crypto_secretbox_NONCEBYTES;
        if (crypto_secretbox_open_easy(plain.data(), box, sealed.size() - crypto_secretbox_NONCEBYTES, nonce,
                                       key_.bytes.data()) != 0) {
            fail("wrong passphrase or tampered secret store");
        }
        try {
            records_ = decode_records(plain);
        } catch (const Error&) {
            fail("corrupt secret store records");
        }
        sodium_memzero(plain.data(), plain.size());
    } else {
        persist();
    }
}

FileSecretStore::~FileSecretStore() {
    sodium_memzero(key_.bytes.data(), Hash32::size);
    if (lock_fd_ >= 0) {
        ::flock(lock_fd_, LOCK_UN);
        ::close(lock_fd_);
    }
}

void FileSecretStore::persist() const {
    Bytes plain = encode_records(records_);
    Bytes sealed(crypto_secretbox_NONCEBYTES + crypto_secretbox_MACBYTES + plain.size());
    rng_.fill(std::span{sealed}.first(crypto_secretbox_NONCEBYTES));
    crypto_secretbox_easy(sealed.data() + crypto_secretbox_NONCEBYTES, plain.data(), plain.size(), sealed.data(),
                          key_.bytes.data());
    sodium_memzero(plain.data(), plain.size());

    Writer w;
    w.str(kFileMagic).u64(kdf_ops_).u64(kdf_mem_).bytes(salt_).bytes(sealed);
    auto tmp = path_;
    tmp += ".tmp";
    {
        std::ofstream out{tmp, std::ios::binary | std::ios::trunc};
        out.write(reinterpret_cast<const char*>(w.data().data()), static_cast<std::streamsize>(w.data().size()));
        out.flush();
        if (!out) fail("cannot write " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path_, ec);
    if (ec) fail("cannot replace " + path_.string() + ": " + ec.message());
}

std::optional<SecretRecord> FileSecretStore::get(const Hash32& data_hash) const {
    std::lock_guard lock{mu_};
    auto it = records_.find(data_hash);
    if (it == records_.end()) return std::nullopt;
    return it->second;
}

void FileSecretStore::set(const Hash32& data_hash, const SecretRecord& record) {
    std::lock_guard lock{mu_};
    records_[data_hash] = record;
    persist();
}

void FileSecretStore::erase(const Hash32& data_hash) {
    std::lock_guard lock{mu_};
    records_.erase(data_hash);
    persist();
}

std::vector<Hash32> FileSecretStore::keys() const {
    std::lock_guard lock{mu_};
    std::vector<Hash32> out;
    for (const auto& [k, v] : records_) out.push_back(k);
    return out;
}

}  // namespace movsc
