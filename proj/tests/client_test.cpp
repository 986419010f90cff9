// Copyright 2026 The movsc Authors
// SPDX-License-Identifier: Apache-2.0

#include <filesystem>
#include <fstream>
#include <future>

#include <catch_amalgamated.hpp>

#include "movsc/client.hpp"
#include "movsc/error.hpp"
#include "support/reference_sha256.hpp"
#include "support/world.hpp"

namespace movsc {

namespace {

    bool contains(ByteView haystack, std::string_view needle) {
        auto n = as_bytes(needle);
        return std::search(haystack.begin(), haystack.end(), n.begin(), n.end()) != haystack.end();
    }

    struct ClientBench : test::World {
        explicit ClientBench(uint64_t seed = 1)
            : World{seed}, notary{make_notary()}, peer{make(Role::kPeer)}, client{node, make(Role::kClient), secrets, rng} {}

        Identity notary;
        Identity peer;
        MemorySecretStore secrets;
        ClientSession client;
    };

    std::filesystem::path temp_dir(const std::string& name) {
        auto dir = std::filesystem::temp_directory_path() / ("movsc-client-" + name);
        std::filesystem::remove_all(dir);
        std::filesystem::create_directories(dir);
        return dir;
    }

}  // namespace

TEST_CASE("certified digest matches an independent implementation") {
    ClientBench b;
    for (std::size_t size : {0UL, 1UL, 55UL, 64UL, 65'537UL, 300'000UL}) {
        auto data = b.rng.bytes(size);
        auto r = b.client.certify_data(data, "SHA256");
        REQUIRE(r.ok());
        test::ReferenceSha256 ref;
        ref.update(data);
        CHECK(r.data_hash.hex() == to_hex(ref.finish()));
        CHECK(b.client.status(r.data_hash)->status == CertStatus::kCertified);
        CHECK(b.client.secret_consistent(r.data_hash));
    }
    auto empty = b.client.certify_data(Bytes{}, "SHA256");
    CHECK(empty.error() == ContractError::kAlreadyCertified);
    CHECK(empty.data_hash.hex() == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("certification failures") {
    ClientBench b;
    auto data = b.rng.bytes(100);
    auto first = b.client.certify_data(data, "SHA256");
    REQUIRE(first.ok());
    auto stored = b.secrets.get(first.data_hash);

    auto again = b.client.certify_data(data, "SHA256");
    CHECK(again.error() == ContractError::kAlreadyCertified);
    CHECK(again.receipt.has_value());
    CHECK(b.secrets.get(first.data_hash) == stored);
    CHECK(b.client.secret_consistent(first.data_hash));

    MemorySecretStore other_secrets;
    ClientSession rival{b.node, b.make(Role::kClient), other_secrets, b.rng};
    CHECK(rival.certify_data(data, "SHA256").error() == ContractError::kAlreadyCertified);
    CHECK_FALSE(other_secrets.get(first.data_hash));

    auto unknown = b.client.certify_data(b.rng.bytes(10), "NOPE");
    CHECK(unknown.error() == ContractError::kUnknownCodeId);
    CHECK_FALSE(unknown.receipt.has_value());
}

TEST_CASE("encrypted requests hide the reference") {
    ClientBench b;
    auto data = b.rng.bytes(256);
    auto hash = b.client.certify_data(data, "SHA256").data_hash;
    const std::string url = "mem://confidential-location-0001";
    const std::string pw = "confidential-password-0001";

    REQUIRE(b.client.initiate_data_validation(hash, b.notary.address(), url, pw, true).ok());
    const auto& sent = *b.client.last_secret_call();
    auto sealed_url = std::get<Bytes>(sent.args.at(2));
    CHECK_FALSE(contains(sealed_url, url));
    CHECK(to_string(crypto::decrypt(crypto::Envelope::decode(sealed_url), b.notary.enc.secret_key)) == url);
    CHECK_THROWS_AS(crypto::decrypt(crypto::Envelope::decode(sealed_url), b.peer.enc.secret_key), Error);

    auto chain = b.ledger.chain_bytes();
    CHECK_FALSE(contains(chain, url));
    CHECK_FALSE(contains(chain, pw));

    REQUIRE(b.client.initiate_data_validation(hash, b.notary.address(), url, pw, false).ok());
    CHECK(contains(b.ledger.chain_bytes(), url));
    CHECK(b.client.secret_consistent(hash));
}

TEST_CASE("secret rotation keeps the store consistent") {
    ClientBench b;
    auto hash = b.client.certify_data(b.rng.bytes(64), "SHA256").data_hash;
    std::vector<crypto::SecretPreimage> seen{b.secrets.get(hash)->current};

    auto step = [&](const ClientResult& r) {
        REQUIRE(r.ok());
        CHECK(b.client.secret_consistent(hash));
        auto rec = b.secrets.get(hash);
        REQUIRE(rec);
        CHECK_FALSE(rec->pending);
        CHECK(std::find(seen.begin(), seen.end(), rec->current) == seen.end());
        seen.push_back(rec->current);
    };
    step(b.client.initiate_data_validation(hash, b.notary.address(), "mem://a", "p", true));
    step(b.client.share_privately(hash, b.peer.address(), "mem://a", "p"));
    step(b.client.publish_data(hash, "file:///public"));

    // a failed call leaves the previous preimage in place
    auto before = b.secrets.get(hash);
    auto ghost = Identity::generate(Role::kPeer, b.rng);
    auto r = b.client.share_privately(hash, ghost.address(), "mem://a", "p");
    CHECK(r.error() == ContractError::kUnknownPeer);
    CHECK(b.secrets.get(hash) == before);
    CHECK(b.client.secret_consistent(hash));

    auto unknown_notary = b.client.initiate_data_validation(hash, b.peer.address(), "mem://a", "p", true);
    CHECK(unknown_notary.error() == ContractError::kUnknownNotary);
    CHECK(b.client.secret_consistent(hash));
}

TEST_CASE("old preimages are refused") {
    ClientBench b;
    auto hash = b.client.certify_data(b.rng.bytes(64), "SHA256").data_hash;
    auto old = b.secrets.get(hash)->current;
    REQUIRE(b.client.publish_data(hash, "file:///x").ok());

    ContractSession attacker{b.node, b.make(Role::kClient)};
    auto next = crypto::generate_secret(b.rng);
    auto replay = attacker.publish(hash, "file:///evil", old, next.commitment);
    CHECK(replay.result.error == ContractError::kWrongSecret);
    CHECK(attacker.withdraw(hash, old).result.error == ContractError::kWrongSecret);
    CHECK(b.client.status(hash)->status == CertStatus::kCertified);
}

TEST_CASE("operations without a stored secret") {
    ClientBench b;
    auto never = b.rng.fixed<Hash32>();
    CHECK(b.client.publish_data(never, "file:///x").error() == ContractError::kNotCertified);

    auto hash = b.client.certify_data(b.rng.bytes(64), "SHA256").data_hash;
    MemorySecretStore empty;
    ClientSession forgetful{b.node, b.client.identity(), empty, b.rng};
    CHECK(forgetful.publish_data(hash, "file:///x").error() == ContractError::kWrongSecret);
    CHECK(forgetful.withdraw_result(hash).error() == ContractError::kWrongSecret);
    CHECK(b.client.secret_consistent(hash));
}

TEST_CASE("withdrawal deletes the preimage") {
    ClientBench b;
    auto hash = b.client.certify_data(b.rng.bytes(64), "SHA256").data_hash;
    REQUIRE(b.client.withdraw_result(hash).ok());
    CHECK_FALSE(b.secrets.get(hash));
    CHECK(b.client.status(hash)->status == CertStatus::kWithdrawn);
    CHECK(b.client.withdraw_result(hash).error() == ContractError::kAlreadyWithdrawn);
    CHECK(b.client.publish_data(hash, "file:///x").error() == ContractError::kWithdrawn);
    CHECK(b.client.certify_data(b.rng.bytes(0), "SHA256").ok());

    // a failed withdrawal keeps the secret
    auto other = b.client.certify_data(b.rng.bytes(65), "SHA256").data_hash;
    auto rec = b.secrets.get(other);
    b.secrets.set(other, SecretRecord{b.rng.fixed<crypto::SecretPreimage>(), std::nullopt});
    CHECK(b.client.withdraw_result(other).error() == ContractError::kWrongSecret);
    CHECK(b.secrets.get(other).has_value());
    b.secrets.set(other, *rec);
    CHECK(b.client.withdraw_result(other).ok());
}

TEST_CASE("file secret store") {
    auto dir = temp_dir("store");
    auto path = dir / "secrets.bin";
    crypto::SeededRng rng{41};
    auto key = rng.fixed<Hash32>();
    SecretRecord rec{rng.fixed<crypto::SecretPreimage>(), rng.fixed<crypto::SecretPreimage>()};
    {
        FileSecretStore store{path, "correct horse", rng, KdfLimits::minimum()};
        CHECK(store.keys().empty());
        store.set(key, rec);
    }
    {
        FileSecretStore store{path, "correct horse", rng, KdfLimits::minimum()};
        CHECK(store.get(key) == rec);
        CHECK(store.keys() == std::vector{key});
    }

    std::ifstream in{path, std::ios::binary};
    Bytes raw{std::istreambuf_iterator<char>{in}, {}};
    in.close();
    CHECK(std::search(raw.begin(), raw.end(), rec.current.bytes.begin(), rec.current.bytes.end()) == raw.end());

    auto code_of = [&](std::string_view pass) {
        try {
            FileSecretStore store{path, pass, rng, KdfLimits::minimum()};
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::kIoFailure;
    };
    CHECK(code_of("wrong horse") == ErrorCode::kSecretStoreFailure);

    raw[raw.size() - 5] ^= 1;
    {
        std::ofstream out{path, std::ios::binary | std::ios::trunc};
        out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    }
    CHECK(code_of("correct horse") == ErrorCode::kSecretStoreFailure);
}

TEST_CASE("file secret store is exclusive") {
    auto path = temp_dir("lock") / "secrets.bin";
    crypto::SeededRng rng{42};
    auto first = std::make_unique<FileSecretStore>(path, "pw", rng, KdfLimits::minimum());
    auto second = std::async(std::launch::async, [&] {
        crypto::SeededRng r{43};
        FileSecretStore store{path, "pw", r, KdfLimits::minimum()};
        return store.keys().size();
    });
    CHECK(second.wait_for(std::chrono::milliseconds{300}) == std::future_status::timeout);
    first->set(rng.fixed<Hash32>(), SecretRecord{rng.fixed<crypto::SecretPreimage>(), std::nullopt});
    first.reset();
    CHECK(second.get() == 1);
}

}  // namespace movsc
