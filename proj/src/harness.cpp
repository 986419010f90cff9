// Copyright 2026 The movsc Authors
// SPDX-License-Identifier: Apache-2.0

#include "movsc/harness.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <map>
#include <memory>

#include "movsc/access_node.hpp"
#include "movsc/client.hpp"
#include "movsc/codeexec.hpp"
#include "movsc/datastore.hpp"
#include "movsc/error.hpp"
#include "movsc/ledger.hpp"
#include "movsc/notary.hpp"
#include "movsc/secret_store.hpp"

#ifndef MOVSC_SCENARIO_DIR
#define MOVSC_SCENARIO_DIR "scenarios"
#endif

namespace movsc {

using nlohmann::json;

namespace {

    [[noreturn]] void malformed(const std::string& what) { throw Error{ErrorCode::kMalformedData, what}; }

    const json& require(const json& j, const char* key) {
        if (!j.is_object() || !j.contains(key)) malformed(std::string{"missing field '"} + key + "'");
        return j.at(key);
    }

    std::string str_field(const json& j, const char* key) {
        const auto& v = require(j, key);
        if (!v.is_string()) malformed(std::string{"field '"} + key + "' must be a string");
        return v.get<std::string>();
    }

    //! Thrown to abort a run after an unanticipated actor failure.
    struct Panic {
        std::string message;
    };

    struct Actor {
        std::string name;
        Identity id;
        bool registered{true};
        DishonestMode mode{DishonestMode::kHonest};
        std::unique_ptr<MemorySecretStore> secrets;
        std::unique_ptr<ClientSession> client;
        std::unique_ptr<NotaryDaemon> daemon;
    };

    struct Blob {
        std::string name;
        Bytes content;
        std::string token;
        std::string password;
        std::string url;
        std::optional<std::string> public_token;
        std::optional<std::string> public_url;
        //! Digest this blob was last certified under.
        std::optional<Hash32> certified_hash;
    };

    std::string outcome_of(const CallResult& r) {
        return r.ok() ? "ok" : std::string{to_string(*r.error)};
    }

    class Run {
      public:
        Run(const Scenario& s, const HarnessOptions& o)
            : scenario_{s},
              seed_{o.seed.value_or(s.seed)},
              rng_{seed_},
              clock_{std::make_shared<MockClock>()},
              ledger_{clock_},
              node_{ledger_},
              store_{rng_},
              fetcher_{&store_} {
            if (o.http) server_ = std::make_unique<DataStoreServer>(store_);
        }

        ScenarioReport execute();

      private:
        void setup_actors();
        void setup_blobs();
        json run_step(std::size_t index, const json& step);
        void evaluate(const json& predicate);
        void check_step(std::size_t index, const json& step, const std::string& outcome);

        Actor& actor(const json& step, const char* key = "actor");
        Actor& actor_named(const std::string& name);
        Blob& blob(const json& step);
        Hash32 hash_of(const Blob& b) const;
        std::string host(const Bytes& content, const std::string& password, std::string& token);

        void add(std::string name, bool passed, std::string detail = {}) {
            report_.predicates.push_back({std::move(name), passed, std::move(detail)});
        }

        bool no_plaintext_leak(std::string& detail) const;
        bool cross_decrypt_fails(std::string& detail) const;
        bool audit_digests_reproduce(const Actor& a, std::string& detail) const;

        const Scenario& scenario_;
        uint64_t seed_;
        crypto::SeededRng rng_;
        std::shared_ptr<MockClock> clock_;
        Ledger ledger_;
        AccessNode node_;
        DataStore store_;
        DataFetcher fetcher_;
        std::unique_ptr<DataStoreServer> server_;
        std::vector<std::unique_ptr<Actor>> actors_;
        std::map<std::string, Blob> blobs_;
        std::vector<std::string> sealed_plaintexts_;
        ScenarioReport report_;
    };

    void Run::setup_actors() {
        if (!scenario_.actors.is_array()) malformed("actors must be an array");
        for (const auto& a : scenario_.actors) {
            auto actor = std::make_unique<Actor>();
            actor->name = str_field(a, "name");
            auto role = role_from_string(str_field(a, "role"));
            if (!role) malformed("unknown role for actor " + actor->name);
            actor->id = Identity::generate(*role, rng_);
            actor->registered = a.value("registered", true);
            if (a.contains("mode")) {
                auto mode = dishonest_mode_from_string(a.at("mode").get<std::string>());
                if (!mode) malformed("unknown notary mode for actor " + actor->name);
                actor->mode = *mode;
            }
            actor->secrets = std::make_unique<MemorySecretStore>();
            actor->client = std::make_unique<ClientSession>(node_, actor->id, *actor->secrets, rng_, &fetcher_);
            NotaryOptions opts;
            opts.mode = actor->mode;
            opts.simulation = true;
            actor->daemon = std::make_unique<NotaryDaemon>(node_, actor->id, fetcher_, opts);
            if (actor->registered) node_.register_identity(actor->id);
            report_.trace.push_back(json{{"event", "actor"},
                                         {"name", actor->name},
                                         {"role", to_string(*role)},
                                         {"address", actor->id.address().hex()},
                                         {"registered", actor->registered},
                                         {"mode", to_string(actor->mode)}});
            actors_.push_back(std::move(actor));
        }
    }

    std::string Run::host(const Bytes& content, const std::string& password, std::string& token) {
        token = store_.put(content, password);
        return server_ ? server_->url_for(token) : DataStore::url_for(token);
    }

    void Run::setup_blobs() {
        if (!scenario_.blobs.is_array()) malformed("blobs must be an array");
        for (const auto& j : scenario_.blobs) {
            Blob b;
            b.name = str_field(j, "name");
            if (j.contains("text")) {
                b.content = to_bytes(j.at("text").get<std::string>());
            } else {
                b.content = rng_.bytes(require(j, "size").get<std::size_t>());
            }
            b.password = rng_.fixed<Hash32>().hex().substr(0, 24);
            b.url = host(b.content, b.password, b.token);
            report_.trace.push_back(json{{"event", "blob"},
                                         {"name", b.name},
                                         {"size", b.content.size()},
                                         {"sha256", crypto::sha256(b.content).hex()}});
            blobs_.emplace(b.name, std::move(b));
        }
    }

    Actor& Run::actor_named(const std::string& name) {
        for (auto& a : actors_) {
            if (a->name == name) return *a;
        }
        malformed("unknown actor " + name);
    }

    Actor& Run::actor(const json& step, const char* key) { return actor_named(str_field(step, key)); }

    Blob& Run::blob(const json& step) {
        auto name = str_field(step, "blob");
        auto it = blobs_.find(name);
        if (it == blobs_.end()) malformed("unknown blob " + name);
        return it->second;
    }

    Hash32 Run::hash_of(const Blob& b) const {
        return b.certified_hash.value_or(crypto::sha256(b.content));
    }

    Value value_from_json(const json& v);

    json Run::run_step(std::size_t index, const json& step) {
        const auto action = str_field(step, "action");
        json event{{"event", "step"}, {"index", index}, {"action", action}};
        if (step.contains("actor")) event["actor"] = step.at("actor");
        if (step.contains("blob")) event["blob"] = step.at("blob");

        auto record = [&](const ClientResult& r) {
            event["result"] = r.result.to_json();
            if (r.receipt) event["block_height"] = r.receipt->block_height;
            return outcome_of(r.result);
        };
        auto record_receipt = [&](const Receipt& r) {
            event["result"] = r.result.to_json();
            event["block_height"] = r.block_height;
            return outcome_of(r.result);
        };

        std::string outcome = "ok";
        try {
            if (action == "register_code") {
                ContractSession session{node_, actor(step).id};
                if (step.value("builtins", false)) {
                    for (const auto& b : codeexec::builtins()) {
                        auto r = session.register_code(codeexec::builtin_entry(b));
                        if (!r.result.ok()) outcome = outcome_of(r.result);
                    }
                } else {
                    CodeEntry entry;
                    entry.code_id = str_field(step, "code_id");
                    entry.kind = step.value("external", false) ? CodeKind::kExternal : CodeKind::kInlineSource;
                    entry.source = str_field(step, "source");
                    entry.integrity_hash = crypto::sha256(as_bytes(entry.source));
                    if (step.contains("integrity_hash")) {
                        auto h = Hash32::from_hex(step.at("integrity_hash").get<std::string>());
                        if (!h) malformed("integrity_hash must be 32 bytes of hex");
                        entry.integrity_hash = *h;
                    }
                    outcome = record_receipt(session.register_code(entry));
                }
            } else if (action == "register_notary") {
                outcome = record_receipt(actor(step).daemon->register_as_notary());
            } else if (action == "certify") {
                auto& a = actor(step);
                auto& b = blob(step);
                auto code = step.value("code", std::string{crypto::kSha256Id});
                ClientResult r;
                if (step.value("fabricate", false)) {
                    auto fake = crypto::sha256(Writer{}.str("movsc-fabricated").bytes(b.content).data());
                    r = a.client->certify_hash(fake, code);
                } else {
                    r = a.client->certify_data(b.content, code);
                }
                if (r.receipt && (r.ok() || !b.certified_hash)) b.certified_hash = r.data_hash;
                event["data_hash"] = r.data_hash.hex();
                outcome = record(r);
            } else if (action == "validate") {
                auto& a = actor(step);
                auto& b = blob(step);
                auto& notary = actor(step, "notary");
                bool encrypted = step.value("encrypted", true);
                std::optional<std::string> used_code;
                if (step.contains("used_code")) used_code = step.at("used_code").get<std::string>();
                if (step.value("misaddressed", false)) {
                    // sealed for a key outside the roster, not the recipient's
                    auto key = crypto::encryption_keypair_from_seed(rng_.fixed<Hash32>()).public_key;
                    auto sealed_url = crypto::encrypt(to_bytes(b.url), key, rng_).encode();
                    auto sealed_pw = crypto::encrypt(to_bytes(b.password), key, rng_).encode();
                    auto secret = a.secrets->get(hash_of(b));
                    auto fresh = crypto::generate_secret(rng_);
                    auto r = ContractSession{node_, a.id}.request_validation(
                        notary.id.address(), hash_of(b), sealed_url, sealed_pw, true,
                        secret ? secret->current : crypto::SecretPreimage{}, fresh.commitment, used_code);
                    if (r.result.ok() && secret) a.secrets->set(hash_of(b), SecretRecord{fresh.preimage, {}});
                    outcome = record_receipt(r);
                } else {
                    if (encrypted) {
                        sealed_plaintexts_.push_back(b.url);
                        sealed_plaintexts_.push_back(b.password);
                    }
                    outcome = record(a.client->initiate_data_validation(hash_of(b), notary.id.address(), b.url,
                                                                        b.password, encrypted, used_code));
                }
            } else if (action == "share") {
                auto& a = actor(step);
                auto& b = blob(step);
                auto& peer = actor(step, "peer");
                sealed_plaintexts_.push_back(b.url);
                sealed_plaintexts_.push_back(b.password);
                outcome = record(a.client->share_privately(hash_of(b), peer.id.address(), b.url, b.password));
            } else if (action == "publish") {
                auto& a = actor(step);
                auto& b = blob(step);
                if (!b.public_url) {
                    std::string token;
                    b.public_url = host(b.content, "", token);
                    b.public_token = token;
                }
                outcome = record(a.client->publish_data(hash_of(b), *b.public_url));
            } else if (action == "withdraw") {
                outcome = record(actor(step).client->withdraw_result(hash_of(blob(step))));
            } else if (action == "poll") {
                auto& a = actor(step);
                json outcomes = json::array();
                for (const auto& o : a.daemon->run_once()) outcomes.push_back(o.to_json());
                event["outcomes"] = outcomes;
                if (step.contains("expect_outcomes")) {
                    std::vector<std::string> got;
                    for (const auto& o : outcomes) got.push_back(o.at("outcome").get<std::string>());
                    auto want = step.at("expect_outcomes").get<std::vector<std::string>>();
                    add("step " + std::to_string(index) + " poll " + a.name + " outcomes", got == want,
                        "got " + json(got).dump());
                }
            } else if (action == "confirm") {
                auto& a = actor(step);
                auto& b = blob(step);
                auto cert = node_.certificate(hash_of(b));
                if (!cert || !cert->public_vp || cert->public_vp->voided) {
                    auto r = ContractSession{node_, a.id}.confirm_publication(hash_of(b), crypto::sha256(b.content));
                    outcome = record_receipt(r);
                } else {
                    auto o = a.daemon->confirm_public(*cert->public_vp);
                    event["outcome"] = o.to_json();
                    outcome = o.contract_error ? std::string{to_string(*o.contract_error)}
                              : o.failure      ? "error:" + std::string{to_string(*o.failure)}
                                               : "ok";
                    if (step.contains("expect_match")) {
                        bool want = step.at("expect_match").get<bool>();
                        bool got = o.kind == ProcessingOutcome::Kind::kMatched;
                        add("step " + std::to_string(index) + " confirm match", o.failure ? false : got == want,
                            o.to_json().dump());
                    }
                }
            } else if (action == "tamper") {
                auto& b = blob(step);
                Mutation m;
                auto kind = step.value("kind", std::string{"flip"});
                if (kind == "flip") m.kind = Mutation::Kind::kFlipByte;
                else if (kind == "truncate") m.kind = Mutation::Kind::kTruncate;
                else if (kind == "append") m.kind = Mutation::Kind::kAppend;
                else if (kind == "identity") m.kind = Mutation::Kind::kIdentity;
                else malformed("unknown mutation " + kind);
                m.offset = step.value("offset", uint64_t{0});
                m.mask = static_cast<uint8_t>(step.value("mask", 1));
                bool is_public = step.value("target", std::string{"private"}) == "public";
                if (is_public && !b.public_token) malformed("blob " + b.name + " has no public copy");
                store_.tamper(is_public ? *b.public_token : b.token, m);
            } else if (action == "replay_secret") {
                auto& a = actor(step);
                const auto& last = a.client->last_secret_call();
                if (!last) malformed("actor " + a.name + " has no secret call to replay");
                event["op"] = last->op;
                outcome = record_receipt(node_.call(a.id, *last));
            } else if (action == "forget_secret") {
                auto& a = actor(step);
                auto h = hash_of(blob(step));
                if (step.value("mode", std::string{"corrupt"}) == "erase") {
                    a.secrets->erase(h);
                } else {
                    a.secrets->set(h, SecretRecord{rng_.fixed<crypto::SecretPreimage>(), {}});
                }
            } else if (action == "accept") {
                outcome = record_receipt(ContractSession{node_, actor(step).id}.accept_vp(hash_of(blob(step))));
            } else if (action == "send_result") {
                auto& b = blob(step);
                auto h = hash_of(b);
                Hash32 digest = step.value("match", true) ? h : crypto::sha256(h.view());
                outcome = record_receipt(ContractSession{node_, actor(step).id}.send_notary_result(h, digest));
            } else if (action == "raw_call") {
                ContractCall call;
                call.op = str_field(step, "op");
                for (const auto& v : step.value("args", json::array())) call.args.push_back(value_from_json(v));
                outcome = record_receipt(node_.call(actor(step).id, std::move(call)));
            } else if (action == "advance_clock") {
                clock_->advance(require(step, "seconds").get<uint64_t>());
            } else {
                malformed("unknown action " + action);
            }
        } catch (const Error& e) {
            // an error the script anticipated is an outcome; anything else is a crash
            if (!step.contains("expect")) {
                report_.trace.push_back(event);
                throw Panic{"step " + std::to_string(index) + " (" + action + "): " + e.what()};
            }
            outcome = "error:" + std::string{to_string(e.code())};
            event["error"] = e.what();
        } catch (const std::exception& e) {
            report_.trace.push_back(event);
            throw Panic{"step " + std::to_string(index) + " (" + action + "): " + e.what()};
        }
        event["outcome"] = outcome;
        check_step(index, step, outcome);
        return event;
    }

    void Run::check_step(std::size_t index, const json& step, const std::string& outcome) {
        static const std::set<std::string> kUnchecked{"poll", "tamper", "forget_secret", "advance_clock"};
        const auto action = step.at("action").get<std::string>();
        if (!step.contains("expect") && kUnchecked.contains(action)) return;
        auto want = step.value("expect", std::string{"ok"});
        add("step " + std::to_string(index) + " " + action + " -> " + want, outcome == want, "got " + outcome);
    }

    bool Run::no_plaintext_leak(std::string& detail) const {
        auto chain = ledger_.chain_bytes();
        std::string_view hay{reinterpret_cast<const char*>(chain.data()), chain.size()};
        for (const auto& p : sealed_plaintexts_) {
            if (p.size() < 8) {
                detail = "plaintext shorter than 8 bytes cannot be checked: " + p;
                return false;
            }
            if (hay.find(p) != std::string_view::npos) {
                detail = "plaintext found on chain: " + p;
                return false;
            }
        }
        detail = std::to_string(sealed_plaintexts_.size()) + " plaintexts checked";
        return true;
    }

    bool Run::cross_decrypt_fails(std::string& detail) const {
        std::size_t trials = 0;
        for (const auto& block : ledger_.blocks()) {
            for (const auto& rec : block.entries) {
                const auto& call = rec.tx.call;
                if (call.op != "request_validation" && call.op != "share_privately") continue;
                if (call.args.size() < 5 || !std::get<bool>(call.args[4])) continue;
                const auto& url = std::get<Bytes>(call.args[2]);
                if (url.empty()) continue;
                Bytes recipient = std::get<Bytes>(call.args[call.op == "share_privately" ? 1 : 0]);
                auto envelope = crypto::Envelope::decode(url);
                for (const auto& a : actors_) {
                    if (a->id.address().to_vector() == recipient) continue;
                    ++trials;
                    try {
                        crypto::decrypt(envelope, a->id.enc.secret_key);
                        detail = a->name + " decrypted a package addressed to someone else";
                        return false;
                    } catch (const Error& e) {
                        if (e.code() != ErrorCode::kDecryptFailure) throw;
                    }
                }
            }
        }
        detail = std::to_string(trials) + " cross-decryption attempts failed";
        return true;
    }

    bool Run::audit_digests_reproduce(const Actor& a, std::string& detail) const {
        std::size_t checked = 0;
        for (const auto& entry : a.daemon->audit().entries()) {
            if (!entry.contains("digest") || !entry.contains("code_id")) continue;
            auto data_hash = *Hash32::from_hex(entry.at("data_hash").get<std::string>());
            const Blob* source = nullptr;
            for (const auto& [name, b] : blobs_) {
                if (hash_of(b) == data_hash) source = &b;
            }
            if (!source) continue;
            bool is_public = entry.at("action") == "confirm";
            auto served = store_.retrieve(is_public ? *source->public_token : source->token,
                                          is_public ? "" : source->password);
            auto code = node_.get_code(entry.at("code_id").get<std::string>());
            if (!code) continue;
            auto program = codeexec::materialize(*code);
            auto recomputed = codeexec::execute(program, served);
            ++checked;
            if (recomputed.hex() != entry.at("digest").get<std::string>()) {
                detail = "package " + std::to_string(entry.at("seq").get<uint64_t>()) + ": reported " +
                         entry.at("digest").get<std::string>() + ", recomputed " + recomputed.hex();
                return false;
            }
        }
        detail = std::to_string(checked) + " digests recomputed";
        return checked > 0;
    }

    void Run::evaluate(const json& p) {
        auto label = p.dump();
        if (p.contains("cert")) {
            auto& b = blobs_.at(p.at("cert").get<std::string>());
            auto cert = node_.certificate(hash_of(b));
            if (p.contains("exists")) {
                add(label, cert.has_value() == p.at("exists").get<bool>());
                return;
            }
            if (!cert) {
                add(label, false, "no certificate");
                return;
            }
            if (p.contains("status")) {
                add(label, to_string(cert->status) == p.at("status").get<std::string>(),
                    "status " + std::string{to_string(cert->status)});
            }
            if (p.contains("attempts")) {
                add(label, cert->attempts == p.at("attempts").get<uint64_t>(),
                    "attempts " + std::to_string(cert->attempts));
            }
            if (p.contains("validator")) {
                auto& v = actor_named(p.at("validator").get<std::string>());
                add(label, cert->validator_address == v.id.address(),
                    cert->validator_address ? cert->validator_address->hex() : "none");
            }
            if (p.contains("vp_validated")) {
                bool got = cert->vp && cert->vp->validated;
                add(label, got == p.at("vp_validated").get<bool>(), got ? "true" : "false");
            }
            return;
        }
        if (p.contains("secret_consistent")) {
            auto& a = actor_named(p.at("secret_consistent").get<std::string>());
            bool got = a.client->secret_consistent(hash_of(blobs_.at(str_field(p, "blob"))));
            add(label, got == p.value("value", true), got ? "true" : "false");
            return;
        }
        if (p.contains("has_secret")) {
            auto& a = actor_named(p.at("has_secret").get<std::string>());
            bool got = a.secrets->get(hash_of(blobs_.at(str_field(p, "blob")))).has_value();
            add(label, got == p.value("value", true), got ? "true" : "false");
            return;
        }
        if (p.contains("audit")) {
            auto& a = actor_named(p.at("audit").get<std::string>());
            std::size_t count = 0;
            for (const auto& e : a.daemon->audit().entries()) {
                bool hit = true;
                if (p.contains("match")) hit = hit && e.contains("match") && e.at("match") == p.at("match");
                if (p.contains("failure")) hit = hit && e.contains("failure") && e.at("failure") == p.at("failure");
                if (p.contains("action")) hit = hit && e.at("action") == p.at("action");
                if (hit) ++count;
            }
            add(label, count == p.at("count").get<std::size_t>(), "count " + std::to_string(count));
            return;
        }
        if (p.contains("audit_digests_reproduce")) {
            auto& a = actor_named(p.at("audit_digests_reproduce").get<std::string>());
            std::string detail;
            bool got = audit_digests_reproduce(a, detail);
            add(label, got == p.value("value", true), detail);
            return;
        }
        if (p.contains("chain_valid")) {
            add(label, ledger_.verify_chain() == p.at("chain_valid").get<bool>());
            return;
        }
        if (p.contains("no_plaintext_leak")) {
            std::string detail;
            add(label, no_plaintext_leak(detail), detail);
            return;
        }
        if (p.contains("cross_decrypt_fails")) {
            std::string detail;
            add(label, cross_decrypt_fails(detail), detail);
            return;
        }
        if (p.contains("errors_seen")) {
            for (const auto& name : p.at("errors_seen")) {
                auto e = contract_error_from_string(name.get<std::string>());
                if (!e) malformed("unknown contract error " + name.get<std::string>());
                add("error seen " + name.get<std::string>(), report_.errors_seen.contains(*e));
            }
            return;
        }
        malformed("unknown predicate " + label);
    }

    ScenarioReport Run::execute() {
        report_.name = scenario_.name;
        report_.seed = seed_;
        try {
            setup_actors();
            setup_blobs();
            if (!scenario_.steps.is_array()) malformed("steps must be an array");
            std::size_t i = 0;
            for (const auto& step : scenario_.steps) report_.trace.push_back(run_step(i++, step));
        } catch (const Panic& p) {
            report_.panic = p.message;
        }
        for (const auto& block : ledger_.blocks()) {
            for (const auto& rec : block.entries) {
                if (rec.result.error) report_.errors_seen.insert(*rec.result.error);
            }
        }
        if (!report_.panic) {
            if (!scenario_.expect.is_array()) malformed("expect must be an array");
            for (const auto& p : scenario_.expect) evaluate(p);
        }
        report_.chain = ledger_.chain_bytes();
        report_.state = ledger_.state_bytes();
        for (const auto& a : actors_) {
            auto entries = a->daemon->audit().entries();
            if (!entries.empty()) report_.audit[a->name] = entries;
        }
        return std::move(report_);
    }

    Value value_from_json(const json& v) {
        if (!v.is_object() || v.size() != 1) malformed("raw_call argument must be a one-key object");
        const auto& [key, val] = *v.items().begin();
        if (key == "none") return std::monostate{};
        if (key == "bool") return val.get<bool>();
        if (key == "u64") return val.get<uint64_t>();
        if (key == "str") return val.get<std::string>();
        if (key == "hex") {
            auto bytes = from_hex(val.get<std::string>());
            if (!bytes) malformed("bad hex in raw_call argument");
            return *bytes;
        }
        malformed("unknown raw_call argument type " + key);
    }

}  // namespace

Scenario Scenario::from_json(const nlohmann::json& j) {
    Scenario s;
    try {
        s.name = str_field(j, "name");
        s.description = j.value("description", std::string{});
        s.seed = j.value("seed", uint64_t{1});
        s.actors = require(j, "actors");
        s.blobs = j.value("blobs", json::array());
        s.steps = require(j, "steps");
        s.expect = j.value("expect", json::array());
    } catch (const json::exception& e) {
        malformed(std::string{"scenario: "} + e.what());
    }
    return s;
}

Scenario Scenario::load(const std::filesystem::path& path) {
    std::ifstream in{path};
    if (!in) throw Error{ErrorCode::kNotFound, "cannot open scenario " + path.string()};
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        malformed(path.string() + ": " + e.what());
    }
    return from_json(j);
}

bool ScenarioReport::passed() const {
    return !panic && std::all_of(predicates.begin(), predicates.end(), [](const Predicate& p) { return p.passed; });
}

nlohmann::json ScenarioReport::to_json() const {
    json preds = json::array();
    for (const auto& p : predicates) preds.push_back(json{{"name", p.name}, {"passed", p.passed}, {"detail", p.detail}});
    json errors = json::array();
    for (auto e : errors_seen) errors.push_back(to_string(e));
    json j{{"scenario", name},
           {"seed", seed},
           {"passed", passed()},
           {"predicates", preds},
           {"errors_seen", errors},
           {"chain_sha256", crypto::sha256(chain).hex()},
           {"state_sha256", crypto::sha256(state).hex()},
           {"audit", audit},
           {"trace", trace}};
    if (panic) j["panic"] = *panic;
    return j;
}

ScenarioReport run_scenario(const Scenario& scenario, const HarnessOptions& options) {
    Run run{scenario, options};
    return run.execute();
}

std::filesystem::path builtin_scenario_dir() {
    if (const char* dir = std::getenv("MOVSC_SCENARIO_DIR")) return dir;
    return MOVSC_SCENARIO_DIR;
}

std::vector<std::filesystem::path> builtin_scenarios() {
    std::vector<std::filesystem::path> out;
    for (const auto& e : std::filesystem::directory_iterator{builtin_scenario_dir()}) {
        if (e.path().extension() == ".json") out.push_back(e.path());
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace movsc
