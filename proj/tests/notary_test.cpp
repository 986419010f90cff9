// Copyright 2026 The movsc Authors
// SPDX-License-Identifier: Apache-2.0

#include <filesystem>
#include <fstream>

#include <catch_amalgamated.hpp>

#include "movsc/client.hpp"
#include "movsc/error.hpp"
#include "movsc/notary.hpp"
#include "support/reference_sha256.hpp"
#include "support/world.hpp"

namespace movsc {

namespace {

    using Kind = ProcessingOutcome::Kind;

    struct NotaryBench : test::World {
        explicit NotaryBench(NotaryOptions options = {}, uint64_t seed = 1)
            : World{seed},
              daemon{node, make(Role::kNotary), fetcher, options},
              client{node, make(Role::kClient), secrets, rng} {
            REQUIRE(daemon.register_as_notary().result.ok());
        }

        //! Stores data, certifies it and asks the daemon to validate it.
        Hash32 submit(const Bytes& data, bool encrypted = true, std::string code = "SHA256") {
            auto token = store.put(data, "pw-" + std::to_string(data.size()));
            auto r = client.certify_data(data, code);
            REQUIRE(r.ok());
            tokens[r.data_hash] = token;
            REQUIRE(client
                        .initiate_data_validation(r.data_hash, daemon.address(), DataStore::url_for(token),
                                                  "pw-" + std::to_string(data.size()), encrypted)
                        .ok());
            return r.data_hash;
        }

        std::size_t count(std::string_view action) const {
            std::size_t n = 0;
            for (const auto& e : daemon.audit().entries()) n += e.at("action") == action;
            return n;
        }

        NotaryDaemon daemon;
        MemorySecretStore secrets;
        ClientSession client;
        std::map<Hash32, std::string> tokens;
    };

    NotaryOptions mode(DishonestMode m) {
        NotaryOptions o;
        o.mode = m;
        o.simulation = true;
        return o;
    }

}  // namespace

TEST_CASE("honest validation") {
    NotaryBench b;
    auto data = b.rng.bytes(5000);
    auto hash = b.submit(data);
    auto outcomes = b.daemon.run_once();
    REQUIRE(outcomes.size() == 1);
    CHECK(outcomes[0].kind == Kind::kMatched);
    test::ReferenceSha256 ref;
    ref.update(data);
    CHECK(outcomes[0].digest->hex() == to_hex(ref.finish()));
    CHECK(b.client.status(hash)->status == CertStatus::kValidated);
    CHECK(b.client.status(hash)->validator_address == b.daemon.address());
    CHECK(b.daemon.run_once().empty());

    std::vector<std::string> actions;
    for (const auto& e : b.daemon.audit().entries()) actions.push_back(e.at("action"));
    CHECK(actions == std::vector<std::string>{"register_notary", "received", "accept", "report"});
    auto report = b.daemon.audit().entries().back();
    CHECK(report.at("match") == true);
    CHECK(report.at("digest") == hash.hex());
}

TEST_CASE("tampered data is reported as a mismatch") {
    NotaryBench b;
    auto hash = b.submit(b.rng.bytes(300), false);
    b.store.tamper(b.tokens[hash], {Mutation::Kind::kFlipByte, 17, 0x80});
    auto outcomes = b.daemon.run_once();
    REQUIRE(outcomes.size() == 1);
    CHECK(outcomes[0].kind == Kind::kMismatched);
    auto cert = b.client.status(hash);
    CHECK(cert->status == CertStatus::kCertified);
    CHECK(cert->attempts == 1);
}

TEST_CASE("infrastructure failures are logged, not reported") {
    NotaryBench b;
    auto fine = b.submit(b.rng.bytes(10));
    auto sealed_wrong = b.client.certify_data(b.rng.bytes(12), "SHA256").data_hash;

    // a reference that does not resolve, one with a wrong password, and one
    // sealed for somebody else
    auto c1 = b.client.certify_data(b.rng.bytes(13), "SHA256").data_hash;
    REQUIRE(b.client.initiate_data_validation(c1, b.daemon.address(), "mem://" + std::string(64, '0'), "x", true).ok());
    auto c2 = b.client.certify_data(b.rng.bytes(14), "SHA256").data_hash;
    auto t2 = b.store.put(b.rng.bytes(14), "right");
    REQUIRE(b.client.initiate_data_validation(c2, b.daemon.address(), DataStore::url_for(t2), "wrong", true).ok());

    ContractSession raw{b.node, b.client.identity()};
    auto rec = b.secrets.get(sealed_wrong);
    auto next = crypto::generate_secret(b.rng);
    auto stranger = Identity::generate(Role::kPeer, b.rng);
    auto foreign = crypto::encrypt(as_bytes(std::string_view{"mem://x"}), stranger.enc.public_key, b.rng).encode();
    REQUIRE(raw.request_validation(b.daemon.address(), sealed_wrong, foreign, foreign, true, rec->current,
                                   next.commitment)
                .result.ok());

    auto outcomes = b.daemon.run_once();
    std::map<Hash32, ProcessingOutcome> by_hash;
    for (const auto& o : outcomes) by_hash[o.data_hash] = o;
    CHECK(by_hash.at(fine).kind == Kind::kMatched);
    CHECK(by_hash.at(c1).failure == ErrorCode::kNotFound);
    CHECK(by_hash.at(c2).failure == ErrorCode::kAccessDenied);
    CHECK(by_hash.at(sealed_wrong).failure == ErrorCode::kDecryptFailure);
    for (auto h : {c1, c2, sealed_wrong}) {
        CHECK(by_hash.at(h).kind == Kind::kFailed);
        auto cert = b.client.status(h);
        CHECK(cert->status == CertStatus::kCertified);
        CHECK(cert->attempts == 0);
        CHECK_FALSE(cert->vp->resolved);
    }
    CHECK_FALSE(b.client.status(sealed_wrong)->vp->accepted);
    // given-up packages are not retried
    CHECK(b.daemon.run_once().empty());
    CHECK(b.count("report") == 1);
}

TEST_CASE("execution timeout is a failure") {
    NotaryOptions o;
    o.execution.timeout = std::chrono::milliseconds{0};
    NotaryBench b{o};
    auto hash = b.submit(b.rng.bytes(1 << 20));
    auto outcomes = b.daemon.run_once();
    REQUIRE(outcomes.size() == 1);
    CHECK(outcomes[0].failure == ErrorCode::kExecutionTimeout);
    CHECK(b.client.status(hash)->attempts == 0);
}

TEST_CASE("dishonest modes") {
    auto without_simulation = [] {
        test::World w;
        NotaryOptions o;
        o.mode = DishonestMode::kValidateBlind;
        NotaryDaemon d{w.node, w.make(Role::kNotary), w.fetcher, o};
    };
    CHECK_THROWS_AS(without_simulation(), Error);

    NotaryBench blind{mode(DishonestMode::kValidateBlind)};
    auto h1 = blind.submit(blind.rng.bytes(100));
    blind.store.tamper(blind.tokens[h1], {Mutation::Kind::kTruncate, 10, 0});
    auto o1 = blind.daemon.run_once();
    CHECK(o1.at(0).kind == Kind::kMatched);
    CHECK(blind.client.status(h1)->status == CertStatus::kValidated);

    NotaryBench liar{mode(DishonestMode::kInvalidateOnPurpose)};
    auto h2 = liar.submit(liar.rng.bytes(100));
    auto o2 = liar.daemon.run_once();
    CHECK(o2.at(0).kind == Kind::kMismatched);
    CHECK(liar.client.status(h2)->attempts == 1);
    CHECK(*o2.at(0).digest == crypto::sha256(Writer{}.str("movsc-invalid").fixed(h2).data()));

    CHECK(dishonest_mode_from_string("validate-blind") == DishonestMode::kValidateBlind);
    CHECK_FALSE(dishonest_mode_from_string("lazy"));
}

TEST_CASE("public confirmation") {
    NotaryBench b;
    auto data = b.rng.bytes(2048);
    auto hash = b.client.certify_data(data, "KECCAK256").data_hash;
    auto token = b.store.put(data, "");
    REQUIRE(b.client.publish_data(hash, DataStore::url_for(token)).ok());
    auto vps = b.node.public_vps();
    REQUIRE(vps.size() == 1);
    auto o = b.daemon.confirm_public(vps[0]);
    CHECK(o.kind == Kind::kMatched);
    CHECK(*o.digest == crypto::keccak256(data));
    CHECK(b.client.status(hash)->status == CertStatus::kPublished);
}

TEST_CASE("worker pool processes every package once") {
    NotaryOptions o;
    o.workers = 4;
    NotaryBench b{o};
    std::vector<Hash32> hashes;
    for (int i = 0; i < 12; ++i) hashes.push_back(b.submit(b.rng.bytes(1000 + static_cast<std::size_t>(i)), i % 2 == 0));
    auto outcomes = b.daemon.run_once();
    CHECK(outcomes.size() == hashes.size());
    for (const auto& out : outcomes) CHECK(out.kind == Kind::kMatched);
    for (const auto& h : hashes) CHECK(b.client.status(h)->status == CertStatus::kValidated);
    CHECK(b.count("report") == hashes.size());
    CHECK(b.ledger.verify_chain());
}

TEST_CASE("audit log mirrors to disk") {
    auto path = std::filesystem::temp_directory_path() / "movsc-notary-audit.ndjson";
    std::filesystem::remove(path);
    NotaryOptions o;
    o.audit_path = path;
    NotaryBench b{o};
    b.submit(b.rng.bytes(64));
    b.daemon.run_once();
    std::ifstream in{path};
    std::vector<nlohmann::json> lines;
    for (std::string line; std::getline(in, line);) lines.push_back(nlohmann::json::parse(line));
    CHECK(lines == b.daemon.audit().entries());
}

}  // namespace movsc
