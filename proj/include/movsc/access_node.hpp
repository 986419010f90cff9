// Copyright 2026 The movsc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "movsc/contract.hpp"
#include "movsc/identity.hpp"
#include "movsc/ledger.hpp"

namespace movsc {

//! Neutral entry point to the chain. Signs and submits calls on behalf of an
//! identity and answers read-only queries against the current state.
class AccessNode {
  public:
    explicit AccessNode(Ledger& ledger) : ledger_{ledger} {}

    Ledger& ledger() { return ledger_; }
    const Ledger& ledger() const { return ledger_; }

    Address register_identity(const Identity& id);
    //! Signs call with the next free nonce of id and submits it.
    Receipt call(const Identity& id, ContractCall call);

    std::optional<Certificate> certificate(const Hash32& data_hash) const;
    std::optional<CodeEntry> get_code(std::string_view code_id) const;
    std::vector<CodeEntry> codes() const;
    std::optional<ValidatorPackage> get_vp(const Address& recipient) const;
    std::vector<ValidatorPackage> pending_vps(const Address& recipient) const;
    std::vector<ValidatorPackage> public_vps() const;
    std::vector<NotaryEntry> notaries() const;
    //! Encryption key registered for address; throws kUnknownAddress.
    crypto::BoxPublicKey get_pkey(const Address& address) const;

  private:
    Ledger& ledger_;
    std::mutex submit_mu_;
};

//! Typed contract interface bound to one identity.
class ContractSession {
  public:
    ContractSession(AccessNode& node, const Identity& id) : node_{node}, id_{id} {}

    const Identity& identity() const { return id_; }
    AccessNode& node() { return node_; }

    Receipt register_code(const CodeEntry& entry);
    Receipt register_notary();
    Receipt send_data_hash(const Hash32& data_hash, const std::string& code_id, const Hash32& secret_hash);
    Receipt request_validation(const Address& notary_id, const Hash32& data_hash, Bytes data_url, Bytes data_pw,
                               bool encrypted, const crypto::SecretPreimage& secret, const Hash32& new_secret_hash,
                               std::optional<std::string> used_code = std::nullopt);
    Receipt accept_vp(const Hash32& data_hash);
    Receipt send_notary_result(const Hash32& data_hash, const Hash32& n_result);
    Receipt publish(const Hash32& data_hash, std::string data_url, const crypto::SecretPreimage& secret,
                    const Hash32& new_secret_hash);
    Receipt confirm_publication(const Hash32& data_hash, const Hash32& n_result);
    Receipt share_privately(const Hash32& data_hash, const Address& peer_id, Bytes data_url, Bytes data_pw,
                            bool encrypted, const crypto::SecretPreimage& secret, const Hash32& new_secret_hash);
    Receipt withdraw(const Hash32& data_hash, const crypto::SecretPreimage& secret);
    Receipt raw(ContractCall call) { return node_.call(id_, std::move(call)); }

  private:
    AccessNode& node_;
    Identity id_;
};

//! Registered builtin code entries (SHA256, KECCAK256) authored by `registrar`.
void register_builtin_code(ContractSession& registrar);

}  // namespace movsc
