// Copyright 2026 The movsc Authors
// SPDX-License-Identifier: Apache-2.0

// movsc: client command line. Every command prints one JSON object.

#include <CLI11.hpp>

#include <csignal>
#include <cstdlib>
#include <iostream>
#include <thread>

#include "movsc/access_node.hpp"
#include "movsc/client.hpp"
#include "movsc/codeexec.hpp"
#include "movsc/datastore.hpp"
#include "movsc/error.hpp"
#include "movsc/ledger.hpp"
#include "movsc/notary.hpp"
#include "movsc/secret_store.hpp"

using nlohmann::json;
using namespace movsc;

namespace {

struct Globals {
    std::string chain{"movsc-chain.bin"};
    std::string identity;
    std::string secrets;
    std::string passphrase;
    std::string kdf{"interactive"};
};

Hash32 parse_hash(const std::string& text) {
    auto h = Hash32::from_hex(text);
    if (!h) throw Error{ErrorCode::kMalformedData, "not a 32-byte hex digest: " + text};
    return *h;
}

Address parse_address(const std::string& text) {
    auto a = Address::from_hex(text);
    if (!a) throw Error{ErrorCode::kMalformedData, "not a 20-byte hex address: " + text};
    return *a;
}

//! Chain, identity and secret store as configured by the global options.
class Context {
  public:
    explicit Context(const Globals& g) : g_{g} { ledger_ = Ledger::open(g.chain); }

    Ledger& ledger() { return *ledger_; }
    AccessNode& node() {
        if (!node_) node_.emplace(*ledger_);
        return *node_;
    }

    const Identity& identity() {
        if (!identity_) {
            if (g_.identity.empty()) throw Error{ErrorCode::kNotFound, "--identity is required"};
            identity_ = Identity::load(g_.identity);
        }
        return *identity_;
    }

    ClientSession& client() {
        if (!client_) {
            std::string pass = g_.passphrase;
            if (pass.empty()) {
                if (const char* env = std::getenv("MOVSC_PASSPHRASE")) pass = env;
            }
            if (pass.empty()) throw Error{ErrorCode::kSecretStoreFailure, "--passphrase or MOVSC_PASSPHRASE required"};
            auto path = g_.secrets.empty() ? g_.identity + ".secrets" : g_.secrets;
            auto limits = g_.kdf == "minimum" ? KdfLimits::minimum() : KdfLimits::interactive();
            store_ = std::make_unique<FileSecretStore>(path, pass, rng_, limits);
            node();
            client_ = std::make_unique<ClientSession>(*node_, identity(), *store_, rng_, &fetcher_);
        }
        return *client_;
    }

    const DataFetcher& fetcher() const { return fetcher_; }

  private:
    const Globals& g_;
    crypto::SystemRng rng_;
    std::unique_ptr<Ledger> ledger_;
    std::optional<AccessNode> node_;
    std::optional<Identity> identity_;
    std::unique_ptr<FileSecretStore> store_;
    std::unique_ptr<ClientSession> client_;
    DataFetcher fetcher_;
};

json cert_json(const std::optional<Certificate>& cert) { return cert ? cert->to_json() : json(nullptr); }

json client_output(const ClientResult& r, Context& ctx) {
    auto j = r.to_json();
    j["certificate"] = cert_json(ctx.node().certificate(r.data_hash));
    return j;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"movsc: certify, validate, publish, share and withdraw off-chain data"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--chain", g.chain, "chain file")->capture_default_str();
    app.add_option("--identity", g.identity, "identity file");
    app.add_option("--secrets", g.secrets, "secret store file (default <identity>.secrets)");
    app.add_option("--passphrase", g.passphrase, "secret store passphrase (or MOVSC_PASSPHRASE)");
    app.add_option("--kdf", g.kdf, "secret store KDF cost for new stores")
        ->check(CLI::IsMember({"interactive", "minimum"}))
        ->capture_default_str();

    // identities and setup
    auto* keygen = app.add_subcommand("keygen", "create an identity file");
    std::string role_name = "client";
    std::string out_path;
    keygen->add_option("--role", role_name)->check(CLI::IsMember({"client", "notary", "peer"}));
    keygen->add_option("--out", out_path)->required();

    auto* init = app.add_subcommand("init", "create the chain file");
    auto* reg = app.add_subcommand("register", "register the identity (and notary role) on chain");

    auto* reg_code = app.add_subcommand("register-code", "register trusted code");
    bool builtins = false;
    std::string code_id, code_file, code_url, code_hash;
    reg_code->add_flag("--builtins", builtins, "register SHA256 and KECCAK256");
    reg_code->add_option("--id", code_id);
    reg_code->add_option("--file", code_file, "inline pipeline source");
    reg_code->add_option("--url", code_url, "external source location");
    reg_code->add_option("--hash", code_hash, "SHA-256 of the external source");

    // lifecycle
    auto* certify = app.add_subcommand("certify", "certify a file");
    std::string path;
    std::string code{crypto::kSha256Id};
    certify->add_option("path", path)->required();
    certify->add_option("--code", code)->capture_default_str();

    std::string hash_text, url, pw, peer, notary;
    bool encrypt = false;
    std::string used_code;
    auto* validate = app.add_subcommand("validate", "ask a notary to validate a certificate");
    validate->add_option("hash", hash_text)->required();
    validate->add_option("--notary", notary)->required();
    validate->add_option("--url", url)->required();
    validate->add_option("--pw", pw);
    validate->add_flag("--encrypt", encrypt);
    validate->add_option("--code", used_code, "code to validate with (default: the certified one)");

    auto* publish = app.add_subcommand("publish", "publish the data");
    publish->add_option("hash", hash_text)->required();
    publish->add_option("--url", url)->required();

    auto* share = app.add_subcommand("share", "share the data privately with a peer");
    share->add_option("hash", hash_text)->required();
    share->add_option("--peer", peer)->required();
    share->add_option("--url", url)->required();
    share->add_option("--pw", pw);

    auto* withdraw = app.add_subcommand("withdraw", "withdraw a certificate");
    withdraw->add_option("hash", hash_text)->required();

    auto* confirm = app.add_subcommand("confirm", "recompute a published package and confirm it");
    confirm->add_option("hash", hash_text)->required();

    // queries
    auto* status = app.add_subcommand("status", "show a certificate");
    status->add_option("hash", hash_text)->required();

    auto* query = app.add_subcommand("query", "read contract state");
    std::string what;
    std::string for_addr;
    query->add_option("what", what)->required()->check(CLI::IsMember({"codes", "notaries", "vps", "public", "state"}));
    query->add_option("--for", for_addr, "recipient address for 'vps'");

    auto* verify = app.add_subcommand("verify-chain", "verify the chain file");
    std::string export_path;
    verify->add_option("--export-json", export_path, "also write the chain as JSON");

    auto* serve = app.add_subcommand("serve", "serve files over loopback HTTP until interrupted");
    std::vector<std::string> files;
    serve->add_option("files", files)->required();
    serve->add_option("--pw", pw);

    CLI11_PARSE(app, argc, argv);

    json out;
    try {
        if (*keygen) {
            crypto::SystemRng rng;
            auto id = Identity::generate(*role_from_string(role_name), rng);
            id.save(out_path);
            out = {{"address", id.address().hex()},
                   {"role", role_name},
                   {"sign_pubkey", id.sign.public_key.hex()},
                   {"enc_pubkey", id.enc.public_key.hex()},
                   {"file", out_path}};
        } else if (*serve) {
            crypto::SystemRng rng;
            DataStore store{rng};
            DataStoreServer server{store};
            json urls = json::object();
            for (const auto& f : files) {
                codeexec::FileSource src{f};
                Bytes content;
                Bytes buf(1 << 16);
                while (auto n = src.read(buf)) content.insert(content.end(), buf.begin(), buf.begin() + n);
                urls[f] = server.url_for(store.put(std::move(content), pw));
            }
            std::cout << json{{"ok", true}, {"urls", urls}}.dump() << std::endl;
            sigset_t set;
            sigemptyset(&set);
            sigaddset(&set, SIGINT);
            sigaddset(&set, SIGTERM);
            pthread_sigmask(SIG_BLOCK, &set, nullptr);
            int sig = 0;
            sigwait(&set, &sig);
            return 0;
        } else {
            Context ctx{g};
            if (*init) {
                out = {{"chain", g.chain}, {"height", ctx.ledger().height()},
                       {"genesis", ctx.ledger().block(0).block_hash.hex()}};
            } else if (*reg) {
                const auto& id = ctx.identity();
                auto& node = ctx.node();
                if (!ctx.ledger().lookup(id.address())) node.register_identity(id);
                out = {{"address", id.address().hex()}, {"role", to_string(id.role)}};
                if (id.role == Role::kNotary) {
                    auto r = ContractSession{node, id}.register_notary();
                    out["register_notary"] = r.to_json();
                }
            } else if (*reg_code) {
                ContractSession session{ctx.node(), ctx.identity()};
                json results = json::array();
                if (builtins) {
                    for (const auto& b : codeexec::builtins()) {
                        auto r = session.register_code(codeexec::builtin_entry(b));
                        results.push_back({{"code_id", b.code_id}, {"result", r.result.to_json()}});
                    }
                } else {
                    if (code_id.empty()) throw Error{ErrorCode::kMalformedData, "--id is required"};
                    CodeEntry entry;
                    entry.code_id = code_id;
                    if (!code_file.empty()) {
                        codeexec::FileSource src{code_file};
                        Bytes content;
                        Bytes buf(1 << 16);
                        while (auto n = src.read(buf)) content.insert(content.end(), buf.begin(), buf.begin() + n);
                        entry.source = to_string(content);
                        entry.integrity_hash = crypto::sha256(content);
                    } else {
                        if (code_url.empty() || code_hash.empty()) {
                            throw Error{ErrorCode::kMalformedData, "--file, or --url with --hash, is required"};
                        }
                        entry.kind = CodeKind::kExternal;
                        entry.source = code_url;
                        entry.integrity_hash = parse_hash(code_hash);
                    }
                    auto r = session.register_code(entry);
                    results.push_back({{"code_id", code_id}, {"result", r.result.to_json()}});
                }
                out = {{"registered", results}, {"ok", true}};
                for (const auto& r : results) {
                    if (!r["result"]["ok"].get<bool>()) out["ok"] = false;
                }
            } else if (*certify) {
                codeexec::FileSource src{path};
                auto r = ctx.client().certify_data(src, code);
                out = client_output(r, ctx);
                out["path"] = path;
            } else if (*validate) {
                std::optional<std::string> uc;
                if (!used_code.empty()) uc = used_code;
                out = client_output(ctx.client().initiate_data_validation(parse_hash(hash_text), parse_address(notary),
                                                                          url, pw, encrypt, uc),
                                    ctx);
            } else if (*publish) {
                out = client_output(ctx.client().publish_data(parse_hash(hash_text), url), ctx);
            } else if (*share) {
                out = client_output(ctx.client().share_privately(parse_hash(hash_text), parse_address(peer), url, pw),
                                    ctx);
            } else if (*withdraw) {
                out = client_output(ctx.client().withdraw_result(parse_hash(hash_text)), ctx);
            } else if (*confirm) {
                auto h = parse_hash(hash_text);
                auto cert = ctx.node().certificate(h);
                if (!cert || !cert->public_vp || cert->public_vp->voided) {
                    auto r = ContractSession{ctx.node(), ctx.identity()}.confirm_publication(h, h);
                    out = r.to_json();
                    out["ok"] = r.result.ok();
                } else {
                    NotaryDaemon daemon{ctx.node(), ctx.identity(), ctx.fetcher()};
                    auto o = daemon.confirm_public(*cert->public_vp);
                    out = o.to_json();
                    out["ok"] = o.kind == ProcessingOutcome::Kind::kMatched;
                }
                out["certificate"] = cert_json(ctx.node().certificate(h));
            } else if (*status) {
                auto h = parse_hash(hash_text);
                out = {{"data_hash", h.hex()}, {"certificate", cert_json(ctx.node().certificate(h))}};
            } else if (*query) {
                auto& node = ctx.node();
                json items = json::array();
                if (what == "codes") {
                    for (const auto& c : node.codes()) items.push_back(c.to_json());
                } else if (what == "notaries") {
                    for (const auto& n : node.notaries()) {
                        items.push_back({{"notary_id", n.notary_id.hex()}, {"enc_pubkey", n.enc_pubkey.hex()},
                                         {"active", n.active}});
                    }
                } else if (what == "vps") {
                    auto who = for_addr.empty() ? ctx.identity().address() : parse_address(for_addr);
                    for (const auto& vp : node.pending_vps(who)) items.push_back(vp.to_json());
                } else if (what == "public") {
                    for (const auto& vp : node.public_vps()) items.push_back(vp.to_json());
                } else {
                    out = ctx.ledger().read([](const WorldState& s) { return s.contract().to_json(); });
                }
                if (what != "state") out = {{what, items}};
            } else if (*verify) {
                bool ok = ctx.ledger().verify_chain();
                out = {{"ok", ok},
                       {"valid", ok},
                       {"height", ctx.ledger().height()},
                       {"head", ctx.ledger().block(ctx.ledger().height()).block_hash.hex()},
                       {"state_sha256", crypto::sha256(ctx.ledger().state_bytes()).hex()}};
                if (!export_path.empty()) {
                    std::ofstream f{export_path};
                    f << ctx.ledger().export_json().dump(2);
                    out["exported"] = export_path;
                }
            }
        }
        if (!out.contains("ok")) out["ok"] = true;
        std::cout << out.dump() << std::endl;
        return out.value("ok", true) ? 0 : 1;
    } catch (const Error& e) {
        std::cout << json{{"ok", false}, {"error", to_string(e.code())}, {"message", e.what()}}.dump() << std::endl;
        return 1;
    } catch (const std::exception& e) {
        std::cout << json{{"ok", false}, {"error", "Internal"}, {"message", e.what()}}.dump() << std::endl;
        return 2;
    }
}
