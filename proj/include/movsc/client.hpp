// Copyright 2026 The movsc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "movsc/access_node.hpp"
#include "movsc/codeexec.hpp"
#include "movsc/datastore.hpp"
#include "movsc/secret_store.hpp"

namespace movsc {

//! Outcome of one client operation. `receipt` is absent when the client
//! decided locally without submitting anything.
struct ClientResult {
    Hash32 data_hash;
    std::optional<Receipt> receipt;
    CallResult result;

    bool ok() const { return result.ok(); }
    std::optional<ContractError> error() const { return result.error; }
    nlohmann::json to_json() const;
};

//! Data owner agent. Talks to the chain through a neutral access node and
//! keeps the current secret preimage of each of its certificates.
class ClientSession {
  public:
    ClientSession(AccessNode& node, Identity identity, SecretStore& secrets, crypto::Rng& rng,
                  const DataFetcher* fetcher = nullptr);

    const Identity& identity() const { return identity_; }
    Address address() const { return identity_.address(); }

    //! Hashes data with the registered code and certifies the digest.
    ClientResult certify_data(codeexec::ByteSource& data, const std::string& code_id);
    ClientResult certify_data(ByteView data, const std::string& code_id);
    //! Certifies a caller-supplied digest without computing it.
    ClientResult certify_hash(const Hash32& data_hash, const std::string& code_id);

    ClientResult initiate_data_validation(const Hash32& data_hash, const Address& notary_id,
                                          const std::string& data_url, const std::string& data_pw, bool encrypted,
                                          std::optional<std::string> used_code = std::nullopt);
    ClientResult publish_data(const Hash32& data_hash, const std::string& public_url);
    //! Always encrypted to the peer.
    ClientResult share_privately(const Hash32& data_hash, const Address& peer_id, const std::string& data_url,
                                 const std::string& data_pw);
    //! Deletes the local preimage on success.
    ClientResult withdraw_result(const Hash32& data_hash);

    std::optional<Certificate> status(const Hash32& data_hash) const;
    //! Whether the stored preimage opens the on-chain commitment.
    bool secret_consistent(const Hash32& data_hash) const;
    //! The last secret-consuming call this session submitted, as sent.
    const std::optional<ContractCall>& last_secret_call() const { return last_secret_call_; }

  private:
    template <class MakeCall>
    ClientResult rotate(const Hash32& data_hash, MakeCall&& make_call);

    //! Seals a field for the recipient, or nullopt if it has no key on chain.
    std::optional<crypto::BoxPublicKey> recipient_key(const Address& recipient) const;

    AccessNode& node_;
    Identity identity_;
    SecretStore& secrets_;
    crypto::Rng& rng_;
    const DataFetcher* fetcher_;
    std::optional<ContractCall> last_secret_call_;
};

}  // namespace movsc
