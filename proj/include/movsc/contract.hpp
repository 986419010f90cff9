// Copyright 2026 The movsc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "movsc/bytes.hpp"
#include "movsc/call.hpp"
#include "movsc/crypto.hpp"
#include "movsc/identity.hpp"

namespace movsc {

//! Failed validations tolerated per certificate before further requests are refused.
inline constexpr uint64_t kMaxRetries = 3;

enum class CertStatus : uint8_t { kCertified = 0, kValidated, kPublished, kShared, kWithdrawn };
enum class PackagePurpose : uint8_t { kValidation = 0, kSharing, kPublication };
enum class CodeKind : uint8_t { kInlineSource = 0, kExternal };

std::string_view to_string(CertStatus s);
std::optional<CertStatus> cert_status_from_string(std::string_view name);
std::string_view to_string(PackagePurpose p);
std::string_view to_string(CodeKind k);

//! Whether the lifecycle allows moving a certificate from one status to another.
//! Staying in place is always allowed except out of kWithdrawn, which is terminal.
bool can_transition(CertStatus from, CertStatus to);

struct CodeEntry {
    std::string code_id;
    CodeKind kind{CodeKind::kInlineSource};
    std::string source;  // program text, or a URL for external entries
    Hash32 integrity_hash;

    void encode(Writer& w) const;
    static CodeEntry decode(Reader& r);
    Bytes encode() const;
    static CodeEntry decode(ByteView bytes);
    nlohmann::json to_json() const;

    friend bool operator==(const CodeEntry&, const CodeEntry&) = default;
};

struct NotaryEntry {
    Address notary_id;
    crypto::BoxPublicKey enc_pubkey;
    bool active{true};

    friend bool operator==(const NotaryEntry&, const NotaryEntry&) = default;
};

//! Request object telling a recipient which software to run over which data.
//! A package without recipient is public (publication).
struct ValidatorPackage {
    uint64_t seq{0};
    PackagePurpose purpose{PackagePurpose::kValidation};
    std::optional<Address> recipient;
    Hash32 data_hash;
    std::string code_id;
    Bytes data_url;  // plaintext, or an encoded crypto::Envelope when encrypted
    Bytes data_pw;
    bool encrypted{false};
    bool accepted{false};
    bool validated{false};
    std::optional<uint64_t> timestamp;
    uint64_t attempts{0};
    //! A result was reported; the package takes no further results.
    bool resolved{false};
    //! Cancelled by withdrawal or superseded by a newer request.
    bool voided{false};

    void encode(Writer& w) const;
    static ValidatorPackage decode(Reader& r);
    Bytes encode() const;
    static ValidatorPackage decode(ByteView bytes);
    nlohmann::json to_json() const;

    friend bool operator==(const ValidatorPackage&, const ValidatorPackage&) = default;
};

struct Certificate {
    Hash32 data_hash;
    uint64_t timestamp{0};
    Hash32 secret_hash;
    std::string code_id;
    std::string used_code;
    std::optional<ValidatorPackage> vp;
    std::optional<ValidatorPackage> public_vp;
    CertStatus status{CertStatus::kCertified};
    std::optional<Address> validator_address;
    uint64_t attempts{0};
    std::optional<uint64_t> withdrawn_at;

    void encode(Writer& w) const;
    static Certificate decode(Reader& r);
    nlohmann::json to_json() const;

    friend bool operator==(const Certificate&, const Certificate&) = default;
};

//! Ledger-supplied environment of one call.
struct CallContext {
    Address sender;
    uint64_t time{0};
    const Directory& directory;
};

//! The moving smart contract: a deterministic state machine
//! (state, call, sender, time) -> (state', result).
class Contract {
  public:
    CallResult apply(const ContractCall& call, const CallContext& ctx);

    const Certificate* certificate(const Hash32& data_hash) const;
    const CodeEntry* code(std::string_view code_id) const;
    std::vector<CodeEntry> codes() const;
    std::vector<NotaryEntry> notaries() const;
    const NotaryEntry* notary(const Address& id) const;
    //! Oldest open package addressed to recipient.
    std::optional<ValidatorPackage> get_vp(const Address& recipient) const;
    //! All open packages addressed to recipient, oldest first.
    std::vector<ValidatorPackage> pending_vps(const Address& recipient) const;
    //! Public packages of certificates that are not withdrawn, oldest first.
    std::vector<ValidatorPackage> public_vps() const;

    //! Canonical byte serialization of the complete state.
    Bytes serialize() const;
    nlohmann::json to_json() const;

  private:
    CallResult register_code(const ContractCall& call, const CallContext& ctx);
    CallResult register_notary(const ContractCall& call, const CallContext& ctx);
    CallResult send_data_hash(const ContractCall& call, const CallContext& ctx);
    CallResult request_validation(const ContractCall& call, const CallContext& ctx);
    CallResult accept_vp(const ContractCall& call, const CallContext& ctx);
    CallResult send_notary_result(const ContractCall& call, const CallContext& ctx);
    CallResult publish(const ContractCall& call, const CallContext& ctx);
    CallResult confirm_publication(const ContractCall& call, const CallContext& ctx);
    CallResult share_privately(const ContractCall& call, const CallContext& ctx);
    CallResult withdraw(const ContractCall& call, const CallContext& ctx);

    ValidatorPackage* open_package_for(const Hash32& data_hash, const Address& sender);

    std::map<std::string, CodeEntry, std::less<>> codes_;
    std::map<Address, NotaryEntry> notaries_;
    std::map<Hash32, Certificate> certs_;
    uint64_t next_seq_{1};
};

}  // namespace movsc
