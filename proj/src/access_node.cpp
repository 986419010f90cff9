// Copyright 2026 The movsc Authors
// SPDX-License-Identifier: Apache-2.0

#include "movsc/access_node.hpp"

#include "movsc/codeexec.hpp"

namespace movsc {

Address AccessNode::register_identity(const Identity& id) {
    std::lock_guard lock{submit_mu_};
    return ledger_.register_identity(id);
}

Receipt AccessNode::call(const Identity& id, ContractCall call) {
    std::lock_guard lock{submit_mu_};
    auto tx = Transaction::make(id, ledger_.next_nonce(id.address()), std::move(call));
    return ledger_.submit(tx);
}

std::optional<Certificate> AccessNode::certificate(const Hash32& data_hash) const {
    return ledger_.read([&](const WorldState& s) -> std::optional<Certificate> {
        const auto* c = s.contract().certificate(data_hash);
        if (!c) return std::nullopt;
        return *c;
    });
}

std::optional<CodeEntry> AccessNode::get_code(std::string_view code_id) const {
    return ledger_.read([&](const WorldState& s) -> std::optional<CodeEntry> {
        const auto* e = s.contract().code(code_id);
        if (!e) return std::nullopt;
        return *e;
    });
}

std::vector<CodeEntry> AccessNode::codes() const {
    return ledger_.read([](const WorldState& s) { return s.contract().codes(); });
}

std::optional<ValidatorPackage> AccessNode::get_vp(const Address& recipient) const {
    return ledger_.read([&](const WorldState& s) { return s.contract().get_vp(recipient); });
}

std::vector<ValidatorPackage> AccessNode::pending_vps(const Address& recipient) const {
    return ledger_.read([&](const WorldState& s) { return s.contract().pending_vps(recipient); });
}

std::vector<ValidatorPackage> AccessNode::public_vps() const {
    return ledger_.read([](const WorldState& s) { return s.contract().public_vps(); });
}

std::vector<NotaryEntry> AccessNode::notaries() const {
    return ledger_.read([](const WorldState& s) { return s.contract().notaries(); });
}

crypto::BoxPublicKey AccessNode::get_pkey(const Address& address) const { return ledger_.get_public_key(address); }

// ---------------------------------------------------------------------------

Receipt ContractSession::register_code(const CodeEntry& entry) {
    return raw(CallBuilder{"register_code"}
                   .arg(entry.code_id)
                   .arg(static_cast<uint64_t>(entry.kind))
                   .arg(entry.source)
                   .arg(entry.integrity_hash)
                   .build());
}

Receipt ContractSession::register_notary() { return raw(CallBuilder{"register_notary"}.build()); }

Receipt ContractSession::send_data_hash(const Hash32& data_hash, const std::string& code_id,
                                        const Hash32& secret_hash) {
    return raw(CallBuilder{"send_data_hash"}.arg(data_hash).arg(code_id).arg(secret_hash).build());
}

Receipt ContractSession::request_validation(const Address& notary_id, const Hash32& data_hash, Bytes data_url,
                                            Bytes data_pw, bool encrypted, const crypto::SecretPreimage& secret,
                                            const Hash32& new_secret_hash, std::optional<std::string> used_code) {
    CallBuilder b{"request_validation"};
    b.arg(notary_id)
        .arg(data_hash)
        .arg(std::move(data_url))
        .arg(std::move(data_pw))
        .arg(encrypted)
        .arg(secret)
        .arg(new_secret_hash);
    if (used_code) b.arg(*used_code);
    return raw(b.build());
}

Receipt ContractSession::accept_vp(const Hash32& data_hash) {
    return raw(CallBuilder{"accept_vp"}.arg(data_hash).build());
}

Receipt ContractSession::send_notary_result(const Hash32& data_hash, const Hash32& n_result) {
    return raw(CallBuilder{"send_notary_result"}.arg(data_hash).arg(n_result).build());
}

Receipt ContractSession::publish(const Hash32& data_hash, std::string data_url, const crypto::SecretPreimage& secret,
                                 const Hash32& new_secret_hash) {
    return raw(CallBuilder{"publish"}
                   .arg(data_hash)
                   .arg(to_bytes(data_url))
                   .arg(secret)
                   .arg(new_secret_hash)
                   .build());
}

Receipt ContractSession::confirm_publication(const Hash32& data_hash, const Hash32& n_result) {
    return raw(CallBuilder{"confirm_publication"}.arg(data_hash).arg(n_result).build());
}

Receipt ContractSession::share_privately(const Hash32& data_hash, const Address& peer_id, Bytes data_url,
                                         Bytes data_pw, bool encrypted, const crypto::SecretPreimage& secret,
                                         const Hash32& new_secret_hash) {
    return raw(CallBuilder{"share_privately"}
                   .arg(data_hash)
                   .arg(peer_id)
                   .arg(std::move(data_url))
                   .arg(std::move(data_pw))
                   .arg(encrypted)
                   .arg(secret)
                   .arg(new_secret_hash)
                   .build());
}

Receipt ContractSession::withdraw(const Hash32& data_hash, const crypto::SecretPreimage& secret) {
    return raw(CallBuilder{"withdraw"}.arg(data_hash).arg(secret).build());
}

void register_builtin_code(ContractSession& registrar) {
    for (const auto& b : codeexec::builtins()) registrar.register_code(codeexec::builtin_entry(b));
}

}  // namespace movsc
