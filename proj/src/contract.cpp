// Copyright 2026 The movsc Authors
// SPDX-License-Identifier: Apache-2.0

#include "movsc/contract.hpp"

#include <algorithm>

#include "movsc/error.hpp"

namespace movsc {

namespace {

    struct MalformedCall {};

    //! Positional, strictly typed view over call arguments.
    class Args {
      public:
        explicit Args(const ContractCall& call) : args_{call.args} {}

        Hash32 hash() { return fixed<Hash32>(); }
        Address address() { return fixed<Address>(); }
        crypto::SecretPreimage secret() { return fixed<crypto::SecretPreimage>(); }
        Bytes bytes() { return get<Bytes>(); }
        std::string str() { return get<std::string>(); }
        bool boolean() { return get<bool>(); }
        uint64_t u64() { return get<uint64_t>(); }
        std::optional<std::string> optional_str() {
            if (i_ < args_.size() && std::holds_alternative<std::monostate>(args_[i_])) {
                ++i_;
                return std::nullopt;
            }
            return str();
        }
        //! Trailing optional arguments may be omitted entirely.
        bool exhausted() const { return i_ >= args_.size(); }
        void done() const {
            if (i_ != args_.size()) throw MalformedCall{};
        }

      private:
        template <class T>
        T get() {
            if (i_ >= args_.size()) throw MalformedCall{};
            const auto* v = std::get_if<T>(&args_[i_++]);
            if (!v) throw MalformedCall{};
            return *v;
        }
        template <class T>
        T fixed() {
            auto raw = get<Bytes>();
            auto v = T::from_view(raw);
            if (!v) throw MalformedCall{};
            return *v;
        }

        const std::vector<Value>& args_;
        std::size_t i_{0};
    };

    //! A commitment must be a real digest: never zero, never the digest of nothing.
    void require_commitment(const Hash32& h) {
        static const Hash32 kEmptyDigest = crypto::sha256({});
        static const Hash32 kZeroPreimageDigest = crypto::commit(crypto::SecretPreimage{});
        if (h.is_zero() || h == kEmptyDigest || h == kZeroPreimageDigest) throw MalformedCall{};
    }

    template <class T>
    void encode_optional(Writer& w, const std::optional<T>& v, auto&& encode_one) {
        w.boolean(v.has_value());
        if (v) encode_one(*v);
    }

}  // namespace

// ---------------------------------------------------------------------------

std::string_view to_string(CertStatus s) {
    switch (s) {
        case CertStatus::kCertified: return "certified";
        case CertStatus::kValidated: return "validated";
        case CertStatus::kPublished: return "published";
        case CertStatus::kShared: return "shared";
        case CertStatus::kWithdrawn: return "withdrawn";
    }
    return "unknown";
}

std::optional<CertStatus> cert_status_from_string(std::string_view name) {
    for (auto s : {CertStatus::kCertified, CertStatus::kValidated, CertStatus::kPublished, CertStatus::kShared,
                   CertStatus::kWithdrawn}) {
        if (to_string(s) == name) return s;
    }
    return std::nullopt;
}

std::string_view to_string(PackagePurpose p) {
    switch (p) {
        case PackagePurpose::kValidation: return "validation";
        case PackagePurpose::kSharing: return "sharing";
        case PackagePurpose::kPublication: return "publication";
    }
    return "unknown";
}

std::string_view to_string(CodeKind k) { return k == CodeKind::kInlineSource ? "inline" : "external"; }

bool can_transition(CertStatus from, CertStatus to) {
    using S = CertStatus;
    if (from == S::kWithdrawn) return false;
    if (from == to || to == S::kWithdrawn) return true;
    switch (from) {
        case S::kCertified: return true;
        case S::kValidated: return to == S::kPublished || to == S::kShared;
        case S::kShared: return to == S::kPublished;
        case S::kPublished: return false;
        case S::kWithdrawn: return false;
    }
    return false;
}

// ---------------------------------------------------------------------------

void CodeEntry::encode(Writer& w) const {
    w.str(code_id).u8(static_cast<uint8_t>(kind)).str(source).fixed(integrity_hash);
}

CodeEntry CodeEntry::decode(Reader& r) {
    CodeEntry e;
    e.code_id = r.str();
    uint8_t kind = r.u8();
    if (kind > 1) throw Error{ErrorCode::kMalformedData, "unknown code kind"};
    e.kind = static_cast<CodeKind>(kind);
    e.source = r.str();
    e.integrity_hash = r.fixed<Hash32>();
    return e;
}

Bytes CodeEntry::encode() const {
    Writer w;
    encode(w);
    return std::move(w).take();
}

CodeEntry CodeEntry::decode(ByteView bytes) {
    Reader r{bytes};
    auto e = decode(r);
    r.expect_end();
    return e;
}

nlohmann::json CodeEntry::to_json() const {
    return {{"code_id", code_id},
            {"kind", to_string(kind)},
            {"source", source},
            {"integrity_hash", integrity_hash.hex()}};
}

void ValidatorPackage::encode(Writer& w) const {
    w.u64(seq).u8(static_cast<uint8_t>(purpose));
    encode_optional(w, recipient, [&](const Address& a) { w.fixed(a); });
    w.fixed(data_hash).str(code_id).bytes(data_url).bytes(data_pw);
    w.boolean(encrypted).boolean(accepted).boolean(validated);
    encode_optional(w, timestamp, [&](uint64_t t) { w.u64(t); });
    w.u64(attempts).boolean(resolved).boolean(voided);
}

ValidatorPackage ValidatorPackage::decode(Reader& r) {
    ValidatorPackage p;
    p.seq = r.u64();
    uint8_t purpose = r.u8();
    if (purpose > 2) throw Error{ErrorCode::kMalformedData, "unknown package purpose"};
    p.purpose = static_cast<PackagePurpose>(purpose);
    if (r.boolean()) p.recipient = r.fixed<Address>();
    p.data_hash = r.fixed<Hash32>();
    p.code_id = r.str();
    p.data_url = r.bytes();
    p.data_pw = r.bytes();
    p.encrypted = r.boolean();
    p.accepted = r.boolean();
    p.validated = r.boolean();
    if (r.boolean()) p.timestamp = r.u64();
    p.attempts = r.u64();
    p.resolved = r.boolean();
    p.voided = r.boolean();
    return p;
}

Bytes ValidatorPackage::encode() const {
    Writer w;
    encode(w);
    return std::move(w).take();
}

ValidatorPackage ValidatorPackage::decode(ByteView bytes) {
    Reader r{bytes};
    auto p = decode(r);
    r.expect_end();
    return p;
}

nlohmann::json ValidatorPackage::to_json() const {
    nlohmann::json j{
        {"seq", seq},
        {"purpose", to_string(purpose)},
        {"recipient", recipient ? nlohmann::json(recipient->hex()) : nlohmann::json(nullptr)},
        {"data_hash", data_hash.hex()},
        {"code_id", code_id},
        {"encrypted", encrypted},
        {"accepted", accepted},
        {"validated", validated},
        {"timestamp", timestamp ? nlohmann::json(*timestamp) : nlohmann::json(nullptr)},
        {"attempts", attempts},
        {"resolved", resolved},
        {"voided", voided},
    };
    // plaintext fields are shown as text, envelopes as hex
    if (encrypted) {
        j["data_url"] = to_hex(data_url);
        j["data_pw"] = to_hex(data_pw);
    } else {
        j["data_url"] = to_string(data_url);
        j["data_pw"] = to_string(data_pw);
    }
    return j;
}

void Certificate::encode(Writer& w) const {
    w.fixed(data_hash).u64(timestamp).fixed(secret_hash).str(code_id).str(used_code);
    encode_optional(w, vp, [&](const ValidatorPackage& p) { p.encode(w); });
    encode_optional(w, public_vp, [&](const ValidatorPackage& p) { p.encode(w); });
    w.u8(static_cast<uint8_t>(status));
    encode_optional(w, validator_address, [&](const Address& a) { w.fixed(a); });
    w.u64(attempts);
    encode_optional(w, withdrawn_at, [&](uint64_t t) { w.u64(t); });
}

Certificate Certificate::decode(Reader& r) {
    Certificate c;
    c.data_hash = r.fixed<Hash32>();
    c.timestamp = r.u64();
    c.secret_hash = r.fixed<Hash32>();
    c.code_id = r.str();
    c.used_code = r.str();
    if (r.boolean()) c.vp = ValidatorPackage::decode(r);
    if (r.boolean()) c.public_vp = ValidatorPackage::decode(r);
    uint8_t status = r.u8();
    if (status > 4) throw Error{ErrorCode::kMalformedData, "unknown status"};
    c.status = static_cast<CertStatus>(status);
    if (r.boolean()) c.validator_address = r.fixed<Address>();
    c.attempts = r.u64();
    if (r.boolean()) c.withdrawn_at = r.u64();
    return c;
}

nlohmann::json Certificate::to_json() const {
    return {
        {"data_hash", data_hash.hex()},
        {"timestamp", timestamp},
        {"secret_hash", secret_hash.hex()},
        {"code_id", code_id},
        {"used_code", used_code},
        {"vp", vp ? vp->to_json() : nlohmann::json(nullptr)},
        {"public_vp", public_vp ? public_vp->to_json() : nlohmann::json(nullptr)},
        {"status", to_string(status)},
        {"validator_address", validator_address ? nlohmann::json(validator_address->hex()) : nlohmann::json(nullptr)},
        {"attempts", attempts},
        {"withdrawn_at", withdrawn_at ? nlohmann::json(*withdrawn_at) : nlohmann::json(nullptr)},
    };
}

// ---------------------------------------------------------------------------

CallResult Contract::apply(const ContractCall& call, const CallContext& ctx) {
    using Handler = CallResult (Contract::*)(const ContractCall&, const CallContext&);
    static const std::map<std::string, Handler, std::less<>> kHandlers{
        {"register_code", &Contract::register_code},
        {"register_notary", &Contract::register_notary},
        {"send_data_hash", &Contract::send_data_hash},
        {"request_validation", &Contract::request_validation},
        {"accept_vp", &Contract::accept_vp},
        {"send_notary_result", &Contract::send_notary_result},
        {"publish", &Contract::publish},
        {"confirm_publication", &Contract::confirm_publication},
        {"share_privately", &Contract::share_privately},
        {"withdraw", &Contract::withdraw},
    };
    auto it = kHandlers.find(call.op);
    if (it == kHandlers.end()) return CallResult::failure(ContractError::kMalformedCall);
    // Handlers parse and check everything before their first write, so a
    // rejected call never leaves partial state behind.
    try {
        return (this->*(it->second))(call, ctx);
    } catch (const MalformedCall&) {
        return CallResult::failure(ContractError::kMalformedCall);
    }
}

CallResult Contract::register_code(const ContractCall& call, const CallContext&) {
    Args a{call};
    auto code_id = a.str();
    auto kind = a.u64();
    auto source = a.str();
    auto integrity = a.hash();
    a.done();
    if (code_id.empty() || kind > 1) throw MalformedCall{};

    if (codes_.contains(code_id)) return CallResult::failure(ContractError::kDuplicateCodeId);
    auto code_kind = static_cast<CodeKind>(kind);
    if (code_kind == CodeKind::kInlineSource && crypto::sha256(as_bytes(source)) != integrity) {
        return CallResult::failure(ContractError::kIntegrityMismatch);
    }
    codes_.emplace(code_id, CodeEntry{code_id, code_kind, std::move(source), integrity});
    return CallResult::success(true);
}

CallResult Contract::register_notary(const ContractCall& call, const CallContext& ctx) {
    Args{call}.done();
    const auto* entry = ctx.directory.find(ctx.sender);
    if (!entry || entry->role != Role::kNotary) return CallResult::failure(ContractError::kNotANotaryIdentity);
    if (notaries_.contains(ctx.sender)) return CallResult::failure(ContractError::kDuplicateNotary);
    notaries_.emplace(ctx.sender, NotaryEntry{ctx.sender, entry->enc_key, true});
    return CallResult::success(true);
}

CallResult Contract::send_data_hash(const ContractCall& call, const CallContext& ctx) {
    Args a{call};
    auto data_hash = a.hash();
    auto code_id = a.str();
    auto secret_hash = a.hash();
    a.done();
    require_commitment(secret_hash);

    if (certs_.contains(data_hash)) return CallResult::failure(ContractError::kAlreadyCertified);
    if (!codes_.contains(code_id)) return CallResult::failure(ContractError::kUnknownCodeId);

    Certificate cert;
    cert.data_hash = data_hash;
    cert.timestamp = ctx.time;
    cert.secret_hash = secret_hash;
    cert.code_id = code_id;
    cert.used_code = code_id;
    certs_.emplace(data_hash, std::move(cert));
    return CallResult::success(true);
}

CallResult Contract::request_validation(const ContractCall& call, const CallContext&) {
    Args a{call};
    auto notary_id = a.address();
    auto data_hash = a.hash();
    auto data_url = a.bytes();
    auto data_pw = a.bytes();
    auto encrypted = a.boolean();
    auto secret = a.secret();
    auto new_secret_hash = a.hash();
    std::optional<std::string> used_code;
    if (!a.exhausted()) used_code = a.optional_str();
    a.done();
    require_commitment(new_secret_hash);

    auto it = certs_.find(data_hash);
    if (it == certs_.end()) return CallResult::failure(ContractError::kNotCertified);
    auto& cert = it->second;
    if (cert.status == CertStatus::kWithdrawn) return CallResult::failure(ContractError::kWithdrawn);
    if (crypto::commit(secret) != cert.secret_hash) return CallResult::failure(ContractError::kWrongSecret);
    auto notary = notaries_.find(notary_id);
    if (notary == notaries_.end() || !notary->second.active) return CallResult::failure(ContractError::kUnknownNotary);
    if (cert.attempts >= kMaxRetries) return CallResult::failure(ContractError::kRetryLimitExceeded);
    std::string code_id = used_code.value_or(cert.used_code);
    if (!codes_.contains(code_id)) return CallResult::failure(ContractError::kUnknownCodeId);

    cert.used_code = code_id;
    cert.secret_hash = new_secret_hash;
    ValidatorPackage vp;
    vp.seq = next_seq_++;
    vp.purpose = PackagePurpose::kValidation;
    vp.recipient = notary_id;
    vp.data_hash = data_hash;
    vp.code_id = code_id;
    vp.data_url = std::move(data_url);
    vp.data_pw = std::move(data_pw);
    vp.encrypted = encrypted;
    vp.attempts = cert.attempts;
    cert.vp = std::move(vp);
    return CallResult::success(true);
}

CallResult Contract::share_privately(const ContractCall& call, const CallContext& ctx) {
    Args a{call};
    auto data_hash = a.hash();
    auto peer_id = a.address();
    auto data_url = a.bytes();
    auto data_pw = a.bytes();
    auto encrypted = a.boolean();
    auto secret = a.secret();
    auto new_secret_hash = a.hash();
    a.done();
    require_commitment(new_secret_hash);

    auto it = certs_.find(data_hash);
    if (it == certs_.end()) return CallResult::failure(ContractError::kNotCertified);
    auto& cert = it->second;
    if (cert.status == CertStatus::kWithdrawn) return CallResult::failure(ContractError::kWithdrawn);
    if (crypto::commit(secret) != cert.secret_hash) return CallResult::failure(ContractError::kWrongSecret);
    if (!ctx.directory.contains(peer_id)) return CallResult::failure(ContractError::kUnknownPeer);
    if (cert.attempts >= kMaxRetries) return CallResult::failure(ContractError::kRetryLimitExceeded);

    cert.secret_hash = new_secret_hash;
    ValidatorPackage vp;
    vp.seq = next_seq_++;
    vp.purpose = PackagePurpose::kSharing;
    vp.recipient = peer_id;
    vp.data_hash = data_hash;
    vp.code_id = cert.used_code;
    vp.data_url = std::move(data_url);
    vp.data_pw = std::move(data_pw);
    vp.encrypted = encrypted;
    vp.attempts = cert.attempts;
    cert.vp = std::move(vp);
    return CallResult::success(true);
}

ValidatorPackage* Contract::open_package_for(const Hash32& data_hash, const Address& sender) {
    auto it = certs_.find(data_hash);
    if (it == certs_.end() || !it->second.vp) return nullptr;
    auto& vp = *it->second.vp;
    if (vp.recipient != sender || vp.voided || vp.resolved) return nullptr;
    return &vp;
}

CallResult Contract::accept_vp(const ContractCall& call, const CallContext& ctx) {
    Args a{call};
    auto data_hash = a.hash();
    a.done();

    auto* vp = open_package_for(data_hash, ctx.sender);
    if (!vp) return CallResult::failure(ContractError::kNotRequestedNotary);
    vp->accepted = true;
    return CallResult::success(codes_.at(vp->code_id).encode());
}

CallResult Contract::send_notary_result(const ContractCall& call, const CallContext& ctx) {
    Args a{call};
    auto data_hash = a.hash();
    auto n_result = a.hash();
    a.done();

    auto* vp = open_package_for(data_hash, ctx.sender);
    if (!vp) return CallResult::failure(ContractError::kNotRequestedNotary);
    if (!vp->accepted) return CallResult::failure(ContractError::kNotAccepted);

    auto& cert = certs_.at(data_hash);
    const bool match = data_hash == n_result;
    vp->resolved = true;
    if (match) {
        vp->validated = true;
        vp->timestamp = ctx.time;
        auto target = vp->purpose == PackagePurpose::kSharing ? CertStatus::kShared : CertStatus::kValidated;
        if (cert.status != target && can_transition(cert.status, target)) {
            cert.status = target;
            cert.validator_address = ctx.sender;
        } else if (!cert.validator_address) {
            cert.validator_address = ctx.sender;
        }
    } else {
        ++cert.attempts;
        vp->attempts = cert.attempts;
    }
    return CallResult::success(match);
}

CallResult Contract::publish(const ContractCall& call, const CallContext& ctx) {
    Args a{call};
    auto data_hash = a.hash();
    auto data_url = a.bytes();
    auto secret = a.secret();
    auto new_secret_hash = a.hash();
    a.done();
    require_commitment(new_secret_hash);

    auto it = certs_.find(data_hash);
    if (it == certs_.end()) return CallResult::failure(ContractError::kNotCertified);
    auto& cert = it->second;
    if (cert.status == CertStatus::kWithdrawn) return CallResult::failure(ContractError::kWithdrawn);
    if (crypto::commit(secret) != cert.secret_hash) return CallResult::failure(ContractError::kWrongSecret);

    cert.secret_hash = new_secret_hash;
    ValidatorPackage vp;
    vp.seq = next_seq_++;
    vp.purpose = PackagePurpose::kPublication;
    vp.data_hash = data_hash;
    vp.code_id = cert.used_code;
    vp.data_url = std::move(data_url);
    vp.attempts = cert.attempts;
    vp.timestamp = ctx.time;
    cert.public_vp = std::move(vp);
    return CallResult::success(true);
}

CallResult Contract::confirm_publication(const ContractCall& call, const CallContext& ctx) {
    Args a{call};
    auto data_hash = a.hash();
    auto n_result = a.hash();
    a.done();

    auto it = certs_.find(data_hash);
    if (it == certs_.end() || !it->second.public_vp || it->second.public_vp->voided) {
        return CallResult::failure(ContractError::kNoPublicPackage);
    }
    auto& cert = it->second;
    auto& vp = *cert.public_vp;
    if (data_hash != n_result) {
        ++cert.attempts;
        vp.attempts = cert.attempts;
        return CallResult::success(false);
    }
    // first confirmer wins; later matching confirmations change nothing
    if (cert.status != CertStatus::kPublished && can_transition(cert.status, CertStatus::kPublished)) {
        cert.status = CertStatus::kPublished;
        cert.validator_address = ctx.sender;
        vp.accepted = true;
        vp.validated = true;
        vp.resolved = true;
        vp.timestamp = ctx.time;
    }
    return CallResult::success(true);
}

CallResult Contract::withdraw(const ContractCall& call, const CallContext& ctx) {
    Args a{call};
    auto data_hash = a.hash();
    auto secret = a.secret();
    a.done();

    auto it = certs_.find(data_hash);
    if (it == certs_.end()) return CallResult::failure(ContractError::kNotCertified);
    auto& cert = it->second;
    // Every preimage of a withdrawn certificate is consumed. Only a caller
    // holding none (all-zero marker) is told the certificate is gone.
    if (cert.status == CertStatus::kWithdrawn) {
        return CallResult::failure(secret.is_zero() ? ContractError::kAlreadyWithdrawn : ContractError::kWrongSecret);
    }
    if (crypto::commit(secret) != cert.secret_hash) return CallResult::failure(ContractError::kWrongSecret);

    cert.status = CertStatus::kWithdrawn;
    cert.withdrawn_at = ctx.time;
    // all-zero commitment: no preimage opens it
    cert.secret_hash = Hash32{};
    if (cert.vp) cert.vp->voided = true;
    if (cert.public_vp) cert.public_vp->voided = true;
    return CallResult::success(true);
}

// ---------------------------------------------------------------------------

const Certificate* Contract::certificate(const Hash32& data_hash) const {
    auto it = certs_.find(data_hash);
    return it == certs_.end() ? nullptr : &it->second;
}

const CodeEntry* Contract::code(std::string_view code_id) const {
    auto it = codes_.find(code_id);
    return it == codes_.end() ? nullptr : &it->second;
}

std::vector<CodeEntry> Contract::codes() const {
    std::vector<CodeEntry> out;
    for (const auto& [_, e] : codes_) out.push_back(e);
    return out;
}

std::vector<NotaryEntry> Contract::notaries() const {
    std::vector<NotaryEntry> out;
    for (const auto& [_, n] : notaries_) out.push_back(n);
    return out;
}

const NotaryEntry* Contract::notary(const Address& id) const {
    auto it = notaries_.find(id);
    return it == notaries_.end() ? nullptr : &it->second;
}

std::vector<ValidatorPackage> Contract::pending_vps(const Address& recipient) const {
    std::vector<ValidatorPackage> out;
    for (const auto& [_, cert] : certs_) {
        if (!cert.vp) continue;
        const auto& vp = *cert.vp;
        if (vp.recipient == recipient && !vp.accepted && !vp.resolved && !vp.voided) out.push_back(vp);
    }
    std::sort(out.begin(), out.end(), [](const auto& l, const auto& r) { return l.seq < r.seq; });
    return out;
}

std::optional<ValidatorPackage> Contract::get_vp(const Address& recipient) const {
    auto pending = pending_vps(recipient);
    if (pending.empty()) return std::nullopt;
    return pending.front();
}

std::vector<ValidatorPackage> Contract::public_vps() const {
    std::vector<ValidatorPackage> out;
    for (const auto& [_, cert] : certs_) {
        if (cert.public_vp && !cert.public_vp->voided) out.push_back(*cert.public_vp);
    }
    std::sort(out.begin(), out.end(), [](const auto& l, const auto& r) { return l.seq < r.seq; });
    return out;
}

Bytes Contract::serialize() const {
    Writer w;
    w.str("movsc-contract-state/1");
    w.u32(static_cast<uint32_t>(codes_.size()));
    for (const auto& [_, e] : codes_) e.encode(w);
    w.u32(static_cast<uint32_t>(notaries_.size()));
    for (const auto& [_, n] : notaries_) w.fixed(n.notary_id).fixed(n.enc_pubkey).boolean(n.active);
    w.u32(static_cast<uint32_t>(certs_.size()));
    for (const auto& [_, c] : certs_) c.encode(w);
    w.u64(next_seq_);
    return std::move(w).take();
}

nlohmann::json Contract::to_json() const {
    nlohmann::json j{{"codes", nlohmann::json::array()},
                     {"notaries", nlohmann::json::array()},
                     {"certificates", nlohmann::json::array()}};
    for (const auto& [_, e] : codes_) j["codes"].push_back(e.to_json());
    for (const auto& [_, n] : notaries_) {
        j["notaries"].push_back(
            {{"notary_id", n.notary_id.hex()}, {"enc_pubkey", n.enc_pubkey.hex()}, {"active", n.active}});
    }
    for (const auto& [_, c] : certs_) j["certificates"].push_back(c.to_json());
    return j;
}

}  // namespace movsc
