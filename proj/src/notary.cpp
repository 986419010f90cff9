// Copyright 2026 The movsc Authors
// SPDX-License-Identifier: Apache-2.0

#include "movsc/notary.hpp"

#include <future>
#include <thread>

#include "movsc/error.hpp"

namespace movsc {

std::string_view to_string(DishonestMode m) {
    switch (m) {
        case DishonestMode::kHonest: return "honest";
        case DishonestMode::kValidateBlind: return "validate-blind";
        case DishonestMode::kInvalidateOnPurpose: return "invalidate-on-purpose";
    }
    return "?";
}

std::optional<DishonestMode> dishonest_mode_from_string(std::string_view name) {
    for (auto m : {DishonestMode::kHonest, DishonestMode::kValidateBlind, DishonestMode::kInvalidateOnPurpose}) {
        if (to_string(m) == name) return m;
    }
    return std::nullopt;
}

std::string_view to_string(ProcessingOutcome::Kind k) {
    switch (k) {
        case ProcessingOutcome::Kind::kMatched: return "matched";
        case ProcessingOutcome::Kind::kMismatched: return "mismatched";
        case ProcessingOutcome::Kind::kFailed: return "failed";
    }
    return "?";
}

nlohmann::json ProcessingOutcome::to_json() const {
    nlohmann::json j;
    j["outcome"] = to_string(kind);
    j["seq"] = seq;
    j["data_hash"] = data_hash.hex();
    if (digest) j["digest"] = digest->hex();
    if (failure) j["failure"] = to_string(*failure);
    if (contract_error) j["contract_error"] = to_string(*contract_error);
    if (!detail.empty()) j["detail"] = detail;
    return j;
}

void AuditLog::open(const std::filesystem::path& path) {
    std::lock_guard lock{mu_};
    file_.emplace(path, std::ios::app);
    if (!*file_) throw Error{ErrorCode::kIoFailure, "cannot open audit log " + path.string()};
}

void AuditLog::append(nlohmann::json entry) {
    std::lock_guard lock{mu_};
    if (file_) {
        *file_ << entry.dump() << '\n';
        file_->flush();
    }
    entries_.push_back(std::move(entry));
}

std::vector<nlohmann::json> AuditLog::entries() const {
    std::lock_guard lock{mu_};
    return entries_;
}

// ---------------------------------------------------------------------------

NotaryDaemon::NotaryDaemon(AccessNode& node, Identity identity, const DataFetcher& fetcher, NotaryOptions options)
    : node_{node},
      identity_{std::move(identity)},
      fetcher_{fetcher},
      options_{std::move(options)} {
    if (options_.mode != DishonestMode::kHonest && !options_.simulation) {
        throw Error{ErrorCode::kAccessDenied, "dishonest notary modes are only available in simulation mode"};
    }
    if (options_.workers == 0) options_.workers = 1;
    if (options_.audit_path) audit_.open(*options_.audit_path);
}

Receipt NotaryDaemon::register_as_notary() {
    auto receipt = ContractSession{node_, identity_}.register_notary();
    nlohmann::json entry{{"actor", address().hex()}, {"action", "register_notary"}, {"ok", receipt.result.ok()}};
    audit_.append(std::move(entry));
    return receipt;
}

void NotaryDaemon::log(const ValidatorPackage& vp, std::string_view action, nlohmann::json extra) {
    nlohmann::json entry{{"actor", address().hex()},
                         {"seq", vp.seq},
                         {"data_hash", vp.data_hash.hex()},
                         {"purpose", to_string(vp.purpose)},
                         {"action", action}};
    if (extra.is_object()) entry.update(extra);
    audit_.append(std::move(entry));
}

ProcessingOutcome NotaryDaemon::fail(const ValidatorPackage& vp, std::string action, ErrorCode code,
                                     std::string detail) {
    log(vp, action, {{"failure", to_string(code)}, {"detail", detail}});
    {
        std::lock_guard lock{failed_mu_};
        given_up_.insert(vp.seq);
    }
    ProcessingOutcome out;
    out.kind = ProcessingOutcome::Kind::kFailed;
    out.seq = vp.seq;
    out.data_hash = vp.data_hash;
    out.failure = code;
    out.detail = std::move(detail);
    return out;
}

NotaryDaemon::Reference NotaryDaemon::open_reference(const ValidatorPackage& vp) const {
    if (!vp.encrypted) return {to_string(vp.data_url), to_string(vp.data_pw)};
    if (vp.data_url.empty()) throw Error{ErrorCode::kDecryptFailure, "package carries no sealed reference"};
    Reference ref;
    ref.url = to_string(crypto::decrypt(crypto::Envelope::decode(vp.data_url), identity_.enc.secret_key));
    ref.password = to_string(crypto::decrypt(crypto::Envelope::decode(vp.data_pw), identity_.enc.secret_key));
    return ref;
}

Hash32 NotaryDaemon::compute(const CodeEntry& entry, const std::string& url, const std::string& password) const {
    auto program = codeexec::materialize(entry, [this](const std::string& u) { return fetcher_.fetch(u, ""); });
    auto source = fetcher_.open(url, password);
    return codeexec::execute(program, *source, options_.execution);
}

ProcessingOutcome NotaryDaemon::process_one(const ValidatorPackage& vp) {
    ContractSession session{node_, identity_};
    log(vp, "received");

    Reference ref;
    try {
        ref = open_reference(vp);
    } catch (const Error& e) {
        // Envelope::decode reports a malformed blob as kMalformedData
        return fail(vp, "decrypt", ErrorCode::kDecryptFailure, e.what());
    }

    auto accepted = session.accept_vp(vp.data_hash);
    if (!accepted.result.ok()) {
        log(vp, "accept", {{"contract_error", to_string(*accepted.result.error)}});
        ProcessingOutcome out;
        out.seq = vp.seq;
        out.data_hash = vp.data_hash;
        out.contract_error = accepted.result.error;
        return out;
    }
    const auto& code_bytes = std::get<Bytes>(accepted.result.value);
    auto entry = CodeEntry::decode(code_bytes);
    log(vp, "accept", {{"code_id", entry.code_id}});

    Hash32 digest;
    switch (options_.mode) {
        case DishonestMode::kValidateBlind: digest = vp.data_hash; break;
        case DishonestMode::kInvalidateOnPurpose:
            digest = crypto::sha256(Writer{}.str("movsc-invalid").fixed(vp.data_hash).data());
            break;
        case DishonestMode::kHonest:
            try {
                digest = compute(entry, ref.url, ref.password);
            } catch (const Error& e) {
                return fail(vp, "execute", e.code(), e.what());
            }
            break;
    }

    auto reported = session.send_notary_result(vp.data_hash, digest);
    ProcessingOutcome out;
    out.seq = vp.seq;
    out.data_hash = vp.data_hash;
    out.digest = digest;
    if (!reported.result.ok()) {
        out.contract_error = reported.result.error;
        log(vp, "report", {{"digest", digest.hex()}, {"contract_error", to_string(*out.contract_error)}});
        return out;
    }
    bool match = std::get<bool>(reported.result.value);
    out.kind = match ? ProcessingOutcome::Kind::kMatched : ProcessingOutcome::Kind::kMismatched;
    log(vp, "report",
        {{"digest", digest.hex()}, {"match", match}, {"mode", to_string(options_.mode)}, {"code_id", entry.code_id}});
    return out;
}

std::vector<ProcessingOutcome> NotaryDaemon::run_once() {
    std::vector<ValidatorPackage> todo;
    {
        std::lock_guard lock{failed_mu_};
        for (auto& vp : node_.pending_vps(address())) {
            if (!given_up_.contains(vp.seq)) todo.push_back(std::move(vp));
        }
    }
    std::vector<ProcessingOutcome> outcomes;
    if (options_.workers <= 1) {
        for (const auto& vp : todo) outcomes.push_back(process_one(vp));
        return outcomes;
    }
    for (std::size_t start = 0; start < todo.size(); start += options_.workers) {
        std::vector<std::future<ProcessingOutcome>> batch;
        for (std::size_t i = start; i < std::min(todo.size(), start + options_.workers); ++i) {
            batch.push_back(std::async(std::launch::async, [this, &todo, i] { return process_one(todo[i]); }));
        }
        for (auto& f : batch) outcomes.push_back(f.get());
    }
    return outcomes;
}

void NotaryDaemon::run_loop(std::stop_token stop) {
    while (!stop.stop_requested()) {
        run_once();
        auto until = std::chrono::steady_clock::now() + options_.poll_interval;
        while (!stop.stop_requested() && std::chrono::steady_clock::now() < until) {
            std::this_thread::sleep_for(std::chrono::milliseconds{20});
        }
    }
}

ProcessingOutcome NotaryDaemon::confirm_public(const ValidatorPackage& vp) {
    log(vp, "received");
    ProcessingOutcome out;
    out.seq = vp.seq;
    out.data_hash = vp.data_hash;
    auto entry = node_.get_code(vp.code_id);
    if (!entry) {
        out.contract_error = ContractError::kUnknownCodeId;
        return out;
    }
    Hash32 digest;
    try {
        digest = compute(*entry, to_string(vp.data_url), "");
    } catch (const Error& e) {
        log(vp, "execute", {{"failure", to_string(e.code())}, {"detail", e.what()}});
        out.failure = e.code();
        out.detail = e.what();
        return out;
    }
    auto receipt = ContractSession{node_, identity_}.confirm_publication(vp.data_hash, digest);
    out.digest = digest;
    if (!receipt.result.ok()) {
        out.contract_error = receipt.result.error;
        log(vp, "confirm", {{"digest", digest.hex()}, {"contract_error", to_string(*out.contract_error)}});
        return out;
    }
    bool match = std::get<bool>(receipt.result.value);
    out.kind = match ? ProcessingOutcome::Kind::kMatched : ProcessingOutcome::Kind::kMismatched;
    log(vp, "confirm", {{"digest", digest.hex()}, {"match", match}, {"code_id", entry->code_id}});
    return out;
}

}  // namespace movsc
