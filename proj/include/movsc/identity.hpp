// Copyright 2026 The movsc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "movsc/bytes.hpp"
#include "movsc/crypto.hpp"

namespace movsc {

enum class Role : uint8_t { kClient = 0, kNotary = 1, kPeer = 2 };

std::string_view to_string(Role role);
std::optional<Role> role_from_string(std::string_view name);

//! Last 20 bytes of SHA-256 over the signing public key.
Address derive_address(const crypto::SignPublicKey& key);

//! An actor's key material. Both keypairs are derived from 32-byte seeds so an
//! identity file only has to carry the seeds.
struct Identity {
    Role role{Role::kClient};
    Hash32 sign_seed;
    Hash32 enc_seed;
    crypto::SigningKeyPair sign;
    crypto::EncryptionKeyPair enc;

    Address address() const { return derive_address(sign.public_key); }

    static Identity from_seeds(Role role, const Hash32& sign_seed, const Hash32& enc_seed);
    static Identity generate(Role role, crypto::Rng& rng);

    nlohmann::json to_json() const;
    static Identity from_json(const nlohmann::json& j);
    static Identity load(const std::string& path);
    void save(const std::string& path) const;
};

//! Public part of a registered identity.
struct DirectoryEntry {
    Address address;
    crypto::SignPublicKey sign_key;
    crypto::BoxPublicKey enc_key;
    Role role{Role::kClient};

    friend bool operator==(const DirectoryEntry&, const DirectoryEntry&) = default;
};

class Directory {
  public:
    //! Returns false if the address is already present.
    bool add(const DirectoryEntry& entry);
    const DirectoryEntry* find(const Address& address) const;
    bool contains(const Address& address) const { return find(address) != nullptr; }
    std::size_t size() const { return entries_.size(); }
    const std::map<Address, DirectoryEntry>& entries() const { return entries_; }

    void encode(Writer& w) const;

  private:
    std::map<Address, DirectoryEntry> entries_;
};

}  // namespace movsc
