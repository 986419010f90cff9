// Copyright 2026 The movsc Authors
// SPDX-License-Identifier: Apache-2.0

#include "movsc/client.hpp"

#include "movsc/error.hpp"

namespace movsc {

nlohmann::json ClientResult::to_json() const {
    nlohmann::json j;
    j["data_hash"] = data_hash.hex();
    j["ok"] = ok();
    j["result"] = result.to_json();
    if (receipt) {
        j["block_height"] = receipt->block_height;
        j["tx_index"] = receipt->tx_index;
    } else {
        j["submitted"] = false;
    }
    return j;
}

ClientSession::ClientSession(AccessNode& node, Identity identity, SecretStore& secrets, crypto::Rng& rng,
                             const DataFetcher* fetcher)
    : node_{node}, identity_{std::move(identity)}, secrets_{secrets}, rng_{rng}, fetcher_{fetcher} {}

ClientResult ClientSession::certify_data(codeexec::ByteSource& data, const std::string& code_id) {
    auto entry = node_.get_code(code_id);
    if (!entry) return {Hash32{}, std::nullopt, CallResult::failure(ContractError::kUnknownCodeId)};
    codeexec::CodeFetcher code_fetch;
    if (fetcher_) code_fetch = [this](const std::string& url) { return fetcher_->fetch(url, ""); };
    auto program = codeexec::materialize(*entry, code_fetch);
    return certify_hash(codeexec::execute(program, data), code_id);
}

ClientResult ClientSession::certify_data(ByteView data, const std::string& code_id) {
    codeexec::MemorySource source{data};
    return certify_data(source, code_id);
}

ClientResult ClientSession::certify_hash(const Hash32& data_hash, const std::string& code_id) {
    auto secret = crypto::generate_secret(rng_);
    // a certificate that already exists keeps whatever preimage we hold for it
    auto previous = secrets_.get(data_hash);
    secrets_.set(data_hash, SecretRecord{previous ? previous->current : secret.preimage, secret.preimage});
    Receipt receipt;
    try {
        receipt = ContractSession{node_, identity_}.send_data_hash(data_hash, code_id, secret.commitment);
    } catch (...) {
        if (previous) secrets_.set(data_hash, *previous); else secrets_.erase(data_hash);
        throw;
    }
    if (receipt.result.ok()) {
        secrets_.set(data_hash, SecretRecord{secret.preimage, std::nullopt});
    } else if (previous) {
        secrets_.set(data_hash, *previous);
    } else {
        secrets_.erase(data_hash);
    }
    return {data_hash, receipt, receipt.result};
}

template <class MakeCall>
ClientResult ClientSession::rotate(const Hash32& data_hash, MakeCall&& make_call) {
    auto record = secrets_.get(data_hash);
    // Without a preimage the all-zero marker is sent; the contract answers
    // with the reason the certificate cannot be opened.
    crypto::SecretPreimage preimage = record ? record->current : crypto::SecretPreimage{};
    auto fresh = crypto::generate_secret(rng_);
    if (record) secrets_.set(data_hash, SecretRecord{preimage, fresh.preimage});

    ContractCall call = make_call(preimage, fresh.commitment);
    last_secret_call_ = call;
    Receipt receipt;
    try {
        receipt = node_.call(identity_, std::move(call));
    } catch (...) {
        if (record) secrets_.set(data_hash, *record);
        throw;
    }
    if (record) {
        secrets_.set(data_hash, receipt.result.ok() ? SecretRecord{fresh.preimage, std::nullopt} : *record);
    }
    return {data_hash, receipt, receipt.result};
}

std::optional<crypto::BoxPublicKey> ClientSession::recipient_key(const Address& recipient) const {
    try {
        return node_.get_pkey(recipient);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::kUnknownAddress) throw;
        return std::nullopt;
    }
}

ClientResult ClientSession::initiate_data_validation(const Hash32& data_hash, const Address& notary_id,
                                                     const std::string& data_url, const std::string& data_pw,
                                                     bool encrypted, std::optional<std::string> used_code) {
    Bytes url = to_bytes(data_url);
    Bytes pw = to_bytes(data_pw);
    if (encrypted) {
        if (auto key = recipient_key(notary_id)) {
            url = crypto::encrypt(url, *key, rng_).encode();
            pw = crypto::encrypt(pw, *key, rng_).encode();
        } else {
            // no key to seal for; nothing confidential leaves the client
            url.clear();
            pw.clear();
        }
    }
    return rotate(data_hash, [&](const crypto::SecretPreimage& secret, const Hash32& next) {
        CallBuilder b{"request_validation"};
        b.arg(notary_id).arg(data_hash).arg(std::move(url)).arg(std::move(pw)).arg(encrypted).arg(secret).arg(next);
        if (used_code) b.arg(*used_code);
        return b.build();
    });
}

ClientResult ClientSession::publish_data(const Hash32& data_hash, const std::string& public_url) {
    return rotate(data_hash, [&](const crypto::SecretPreimage& secret, const Hash32& next) {
        return CallBuilder{"publish"}.arg(data_hash).arg(to_bytes(public_url)).arg(secret).arg(next).build();
    });
}

ClientResult ClientSession::share_privately(const Hash32& data_hash, const Address& peer_id,
                                            const std::string& data_url, const std::string& data_pw) {
    Bytes url;
    Bytes pw;
    if (auto key = recipient_key(peer_id)) {
        url = crypto::encrypt(to_bytes(data_url), *key, rng_).encode();
        pw = crypto::encrypt(to_bytes(data_pw), *key, rng_).encode();
    }
    return rotate(data_hash, [&](const crypto::SecretPreimage& secret, const Hash32& next) {
        return CallBuilder{"share_privately"}
            .arg(data_hash)
            .arg(peer_id)
            .arg(std::move(url))
            .arg(std::move(pw))
            .arg(true)
            .arg(secret)
            .arg(next)
            .build();
    });
}

ClientResult ClientSession::withdraw_result(const Hash32& data_hash) {
    auto record = secrets_.get(data_hash);
    crypto::SecretPreimage preimage = record ? record->current : crypto::SecretPreimage{};
    ContractCall call = CallBuilder{"withdraw"}.arg(data_hash).arg(preimage).build();
    last_secret_call_ = call;
    auto receipt = node_.call(identity_, std::move(call));
    if (receipt.result.ok()) secrets_.erase(data_hash);
    return {data_hash, receipt, receipt.result};
}

std::optional<Certificate> ClientSession::status(const Hash32& data_hash) const {
    return node_.certificate(data_hash);
}

bool ClientSession::secret_consistent(const Hash32& data_hash) const {
    auto record = secrets_.get(data_hash);
    auto cert = node_.certificate(data_hash);
    if (!record || !cert) return false;
    return crypto::commit(record->current) == cert->secret_hash;
}

}  // namespace movsc
