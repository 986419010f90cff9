// Copyright 2026 The movsc Authors
// SPDX-License-Identifier: Apache-2.0

#include "movsc/identity.hpp"

#include <fstream>

#include "movsc/error.hpp"

namespace movsc {

std::string_view to_string(Role role) {
    switch (role) {
        case Role::kClient: return "client";
        case Role::kNotary: return "notary";
        case Role::kPeer: return "peer";
    }
    return "unknown";
}

std::optional<Role> role_from_string(std::string_view name) {
    if (name == "client") return Role::kClient;
    if (name == "notary") return Role::kNotary;
    if (name == "peer") return Role::kPeer;
    return std::nullopt;
}

Address derive_address(const crypto::SignPublicKey& key) {
    auto digest = crypto::sha256(key.view());
    return *Address::from_view(digest.view().last(Address::size));
}

Identity Identity::from_seeds(Role role, const Hash32& sign_seed, const Hash32& enc_seed) {
    Identity id;
    id.role = role;
    id.sign_seed = sign_seed;
    id.enc_seed = enc_seed;
    id.sign = crypto::signing_keypair_from_seed(sign_seed);
    id.enc = crypto::encryption_keypair_from_seed(enc_seed);
    return id;
}

Identity Identity::generate(Role role, crypto::Rng& rng) {
    auto sign_seed = rng.fixed<Hash32>();
    auto enc_seed = rng.fixed<Hash32>();
    return from_seeds(role, sign_seed, enc_seed);
}

nlohmann::json Identity::to_json() const {
    return {
        {"role", to_string(role)},
        {"address", address().hex()},
        {"sign_seed", sign_seed.hex()},
        {"enc_seed", enc_seed.hex()},
        {"sign_public_key", sign.public_key.hex()},
        {"enc_public_key", enc.public_key.hex()},
    };
}

Identity Identity::from_json(const nlohmann::json& j) {
    auto role = role_from_string(j.at("role").get<std::string>());
    auto sign_seed = Hash32::from_hex(j.at("sign_seed").get<std::string>());
    auto enc_seed = Hash32::from_hex(j.at("enc_seed").get<std::string>());
    if (!role || !sign_seed || !enc_seed) throw Error{ErrorCode::kMalformedData, "invalid identity file"};
    return from_seeds(*role, *sign_seed, *enc_seed);
}

Identity Identity::load(const std::string& path) {
    std::ifstream in{path};
    if (!in) throw Error{ErrorCode::kIoFailure, "cannot open identity file " + path};
    try {
        return from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::exception& e) {
        throw Error{ErrorCode::kMalformedData, std::string{"identity file: "} + e.what()};
    }
}

void Identity::save(const std::string& path) const {
    std::ofstream out{path, std::ios::trunc};
    if (!out) throw Error{ErrorCode::kIoFailure, "cannot write identity file " + path};
    out << to_json().dump(2) << '\n';
}

bool Directory::add(const DirectoryEntry& entry) { return entries_.emplace(entry.address, entry).second; }

const DirectoryEntry* Directory::find(const Address& address) const {
    auto it = entries_.find(address);
    return it == entries_.end() ? nullptr : &it->second;
}

void Directory::encode(Writer& w) const {
    w.u32(static_cast<uint32_t>(entries_.size()));
    for (const auto& [address, e] : entries_) {
        w.fixed(address).fixed(e.sign_key).fixed(e.enc_key).u8(static_cast<uint8_t>(e.role));
    }
}

}  // namespace movsc
