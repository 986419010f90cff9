// Copyright 2026 The movsc Authors
// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include "movsc/call.hpp"
#include "movsc/crypto.hpp"
#include "movsc/encoding.hpp"
#include "movsc/error.hpp"

namespace movsc {

TEST_CASE("writer layout is big-endian with u32 length prefixes") {
    Writer w;
    w.u8(0xab).u32(1).u64(2).str("ab").boolean(true);
    CHECK(to_hex(w.data()) == "ab000000010000000000000002000000026162" "01");
}

TEST_CASE("reader round-trips every field type") {
    crypto::SeededRng rng{3};
    for (int i = 0; i < 200; ++i) {
        auto u64 = rng.u64();
        auto u32 = static_cast<uint32_t>(rng.u64());
        auto blob = rng.bytes(rng.below(300));
        auto hash = rng.fixed<Hash32>();
        bool flag = rng.below(2) == 1;

        Writer w;
        w.u64(u64).u32(u32).bytes(blob).fixed(hash).boolean(flag);
        Reader r{w.data()};
        CHECK(r.u64() == u64);
        CHECK(r.u32() == u32);
        CHECK(r.bytes() == blob);
        CHECK(r.fixed<Hash32>() == hash);
        CHECK(r.boolean() == flag);
        CHECK_NOTHROW(r.expect_end());
    }
}

TEST_CASE("reader rejects malformed input") {
    auto expect_malformed = [](auto&& f) {
        try {
            f();
            FAIL("no exception");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::kMalformedData);
        }
    };
    Bytes two_as_bool{2};
    expect_malformed([&] { Reader{two_as_bool}.boolean(); });
    Bytes short_u64{0, 0, 0};
    expect_malformed([&] { Reader{short_u64}.u64(); });
    Bytes overlong{0, 0, 0, 9, 'a'};
    expect_malformed([&] { Reader{overlong}.bytes(); });
    Bytes trailing{1, 0};
    expect_malformed([&] {
        Reader r{trailing};
        r.boolean();
        r.expect_end();
    });
}

TEST_CASE("contract calls round-trip through the canonical encoding") {
    crypto::SeededRng rng{4};
    for (int i = 0; i < 100; ++i) {
        ContractCall call;
        call.op = "op" + std::to_string(i);
        for (std::size_t k = 0; k < rng.below(6); ++k) {
            switch (rng.below(5)) {
                case 0: call.args.emplace_back(std::monostate{}); break;
                case 1: call.args.emplace_back(rng.below(2) == 1); break;
                case 2: call.args.emplace_back(rng.u64()); break;
                case 3: call.args.emplace_back(std::string(rng.below(20), 'x')); break;
                default: call.args.emplace_back(rng.bytes(rng.below(40))); break;
            }
        }
        Writer w;
        call.encode(w);
        Reader r{w.data()};
        CHECK(ContractCall::decode(r) == call);
        CHECK(r.at_end());
    }
}

TEST_CASE("call results round-trip") {
    std::vector<CallResult> results{CallResult::success(), CallResult::success(true),
                                    CallResult::success(uint64_t{42}), CallResult::success(Bytes{1, 2, 3})};
    for (auto e : kAllContractErrors) results.push_back(CallResult::failure(e));
    for (const auto& res : results) {
        Writer w;
        res.encode(w);
        Reader r{w.data()};
        CHECK(CallResult::decode(r) == res);
    }
}

TEST_CASE("contract error names are unique and parse back") {
    std::set<std::string> names;
    for (auto e : kAllContractErrors) {
        auto name = std::string{to_string(e)};
        CHECK(names.insert(name).second);
        CHECK(contract_error_from_string(name) == e);
    }
    CHECK(names.size() == 17);
    CHECK_FALSE(contract_error_from_string("NoSuchError"));
}

TEST_CASE("hex helpers") {
    CHECK(to_hex(Bytes{0x00, 0xff, 0x10}) == "00ff10");
    CHECK(from_hex("0x00FF10") == Bytes{0x00, 0xff, 0x10});
    CHECK_FALSE(from_hex("abc"));
    CHECK_FALSE(from_hex("zz"));
    CHECK_FALSE(Hash32::from_hex("00"));
    CHECK(Address::from_hex(std::string(40, 'a')).has_value());
}

}  // namespace movsc
