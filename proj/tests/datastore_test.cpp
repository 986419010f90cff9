// Copyright 2026 The movsc Authors
// SPDX-License-Identifier: Apache-2.0

#include <filesystem>
#include <fstream>
#include <regex>
#include <set>

#include <catch_amalgamated.hpp>

#include "movsc/datastore.hpp"
#include "movsc/error.hpp"

namespace movsc {

namespace {

    ErrorCode failure_of(auto&& f) {
        try {
            f();
        } catch (const Error& e) {
            return e.code();
        }
        FAIL("no exception");
        return ErrorCode::kIoFailure;
    }

    Bytes drain(codeexec::ByteSource& src) {
        Bytes out;
        Bytes buf(4096);
        while (auto n = src.read(buf)) out.insert(out.end(), buf.begin(), buf.begin() + static_cast<long>(n));
        return out;
    }

}  // namespace

TEST_CASE("objects are released only against their password") {
    crypto::SeededRng rng{31};
    DataStore store{rng};
    auto content = rng.bytes(1000);
    auto token = store.put(content, "secret");
    CHECK(std::regex_match(token, std::regex{"[0-9a-f]{64}"}));
    CHECK(store.retrieve(token, "secret") == content);
    CHECK(failure_of([&] { store.retrieve(token, "Secret"); }) == ErrorCode::kAccessDenied);
    CHECK(failure_of([&] { store.retrieve(token, ""); }) == ErrorCode::kAccessDenied);
    CHECK(failure_of([&] { store.retrieve(std::string(64, '0'), "secret"); }) == ErrorCode::kNotFound);
    CHECK(store.used_bytes() == 1000);

    auto empty = store.put({}, "");
    CHECK(store.retrieve(empty, "").empty());
}

TEST_CASE("tokens are distinct") {
    crypto::SeededRng rng{32};
    DataStore store{rng};
    std::set<std::string> tokens;
    for (int i = 0; i < 500; ++i) CHECK(tokens.insert(store.put(Bytes{1}, "pw")).second);
}

TEST_CASE("capacity is enforced") {
    crypto::SeededRng rng{33};
    DataStore store{rng, 100};
    store.put(Bytes(60), "a");
    CHECK(failure_of([&] { store.put(Bytes(41), "b"); }) == ErrorCode::kStorageFull);
    CHECK_NOTHROW(store.put(Bytes(40), "c"));
    CHECK(store.used_bytes() == 100);
}

TEST_CASE("tampering") {
    crypto::SeededRng rng{34};
    DataStore store{rng};
    Bytes content{1, 2, 3, 4};
    auto token = store.put(content, "pw");

    auto stream = store.open(token, "pw");
    store.tamper(token, {Mutation::Kind::kFlipByte, 1, 0xff});
    CHECK(store.retrieve(token, "pw") == Bytes{1, 0xfd, 3, 4});
    // an already opened stream keeps its snapshot
    CHECK(drain(*stream) == content);

    store.tamper(token, {Mutation::Kind::kTruncate, 2, 0});
    CHECK(store.retrieve(token, "pw") == Bytes{1, 0xfd});
    store.tamper(token, {Mutation::Kind::kAppend, 0, 0x09});
    CHECK(store.retrieve(token, "pw") == Bytes{1, 0xfd, 0x09});
    store.tamper(token, {Mutation::Kind::kIdentity, 0, 0});
    CHECK(store.retrieve(token, "pw") == Bytes{1, 0xfd, 0x09});

    crypto::SeededRng rng2{35};
    DataStore production{rng2, 1 << 20, false};
    auto t = production.put(content, "pw");
    CHECK(failure_of([&] { production.tamper(t, {Mutation::Kind::kFlipByte, 0, 1}); }) == ErrorCode::kAccessDenied);
    CHECK(production.retrieve(t, "pw") == content);
}

TEST_CASE("fetcher schemes") {
    crypto::SeededRng rng{36};
    DataStore store{rng};
    auto content = rng.bytes(3000);
    auto token = store.put(content, "pw");
    DataFetcher fetcher{&store};
    CHECK(fetcher.fetch(DataStore::url_for(token), "pw") == content);
    CHECK(failure_of([&] { fetcher.fetch(DataStore::url_for(token), "nope"); }) == ErrorCode::kAccessDenied);

    auto path = std::filesystem::temp_directory_path() / "movsc-datastore-file.bin";
    {
        std::ofstream out{path, std::ios::binary};
        out.write(reinterpret_cast<const char*>(content.data()), static_cast<std::streamsize>(content.size()));
    }
    CHECK(fetcher.fetch("file://" + path.string(), "ignored") == content);
    CHECK(failure_of([&] { fetcher.fetch("file:///nonexistent/movsc", ""); }) == ErrorCode::kNotFound);
    CHECK(failure_of([&] { fetcher.fetch("gopher://x", ""); }) == ErrorCode::kFetchFailure);
    CHECK(failure_of([&] { fetcher.fetch("", ""); }) == ErrorCode::kFetchFailure);

    DataFetcher detached;
    CHECK(failure_of([&] { detached.fetch(DataStore::url_for(token), "pw"); }) == ErrorCode::kFetchFailure);
}

TEST_CASE("loopback http server") {
    crypto::SeededRng rng{37};
    DataStore store{rng};
    auto content = rng.bytes(200'000);
    auto token = store.put(content, "pw");
    DataStoreServer server{store};
    REQUIRE(server.port() > 0);
    DataFetcher fetcher;
    CHECK(fetcher.fetch(server.url_for(token), "pw") == content);
    CHECK(failure_of([&] { fetcher.fetch(server.url_for(token), "bad"); }) == ErrorCode::kAccessDenied);
    CHECK(failure_of([&] { fetcher.fetch(server.url_for(std::string(64, 'a')), "pw"); }) == ErrorCode::kNotFound);
    CHECK(failure_of([&] { fetcher.fetch("http://127.0.0.1:1/objects/00", "pw"); }) == ErrorCode::kFetchFailure);
}

}  // namespace movsc
