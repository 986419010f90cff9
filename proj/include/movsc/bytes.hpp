// Copyright 2026 The movsc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace movsc {

using Bytes = std::vector<uint8_t>;
using ByteView = std::span<const uint8_t>;

std::string to_hex(ByteView bytes);
std::optional<Bytes> from_hex(std::string_view hex);

inline ByteView as_bytes(std::string_view s) {
    return {reinterpret_cast<const uint8_t*>(s.data()), s.size()};
}

inline Bytes to_bytes(std::string_view s) {
    auto v = as_bytes(s);
    return {v.begin(), v.end()};
}

inline std::string to_string(ByteView bytes) {
    return {reinterpret_cast<const char*>(bytes.data()), bytes.size()};
}

//! Fixed-width byte string. The tag keeps hashes, addresses and keys from
//! being mixed up at compile time.
template <std::size_t N, class Tag>
struct FixedBytes {
    static constexpr std::size_t size = N;
    std::array<uint8_t, N> bytes{};

    ByteView view() const { return {bytes.data(), N}; }
    Bytes to_vector() const { return {bytes.begin(), bytes.end()}; }
    std::string hex() const { return to_hex(view()); }
    bool is_zero() const {
        return std::all_of(bytes.begin(), bytes.end(), [](uint8_t b) { return b == 0; });
    }

    static std::optional<FixedBytes> from_view(ByteView v) {
        if (v.size() != N) return std::nullopt;
        FixedBytes out;
        std::copy(v.begin(), v.end(), out.bytes.begin());
        return out;
    }
    static std::optional<FixedBytes> from_hex(std::string_view hex) {
        auto raw = movsc::from_hex(hex);
        if (!raw) return std::nullopt;
        return from_view(*raw);
    }

    friend auto operator<=>(const FixedBytes&, const FixedBytes&) = default;
    friend bool operator==(const FixedBytes&, const FixedBytes&) = default;
};

struct HashTag {};
struct AddressTag {};

using Hash32 = FixedBytes<32, HashTag>;
using Address = FixedBytes<20, AddressTag>;

}  // namespace movsc
