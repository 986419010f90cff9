// Copyright 2026 The movsc Authors
// SPDX-License-Identifier: Apache-2.0

#include <bit>

#include "movsc/crypto.hpp"

namespace movsc::crypto {

namespace {

    constexpr std::array<uint64_t, 24> kRoundConstants{
        0x0000000000000001ULL, 0x0000000000008082ULL, 0x800000000000808aULL, 0x8000000080008000ULL,
        0x000000000000808bULL, 0x0000000080000001ULL, 0x8000000080008081ULL, 0x8000000000008009ULL,
        0x000000000000008aULL, 0x0000000000000088ULL, 0x0000000080008009ULL, 0x000000008000000aULL,
        0x000000008000808bULL, 0x800000000000008bULL, 0x8000000000008089ULL, 0x8000000000008003ULL,
        0x8000000000008002ULL, 0x8000000000000080ULL, 0x000000000000800aULL, 0x800000008000000aULL,
        0x8000000080008081ULL, 0x8000000000008080ULL, 0x0000000080000001ULL, 0x8000000080008008ULL,
    };

    // Rotation offsets and lane permutation of the combined rho/pi step,
    // walked along the pi cycle starting at lane 1.
    constexpr std::array<int, 24> kRotations{1,  3,  6,  10, 15, 21, 28, 36, 45, 55, 2,  14,
                                             27, 41, 56, 8,  25, 43, 62, 18, 39, 61, 20, 44};
    constexpr std::array<int, 24> kPiLanes{10, 7,  11, 17, 18, 3, 5,  16, 8,  21, 24, 4,
                                           15, 23, 19, 13, 12, 2, 20, 14, 22, 9,  6,  1};

}  // namespace

void keccak_f1600(std::array<uint64_t, 25>& st) {
    std::array<uint64_t, 5> bc{};
    for (uint64_t rc : kRoundConstants) {
        // theta
        for (int i = 0; i < 5; ++i) bc[i] = st[i] ^ st[i + 5] ^ st[i + 10] ^ st[i + 15] ^ st[i + 20];
        for (int i = 0; i < 5; ++i) {
            uint64_t t = bc[(i + 4) % 5] ^ std::rotl(bc[(i + 1) % 5], 1);
            for (int j = 0; j < 25; j += 5) st[j + i] ^= t;
        }
        // rho + pi
        uint64_t carry = st[1];
        for (int i = 0; i < 24; ++i) {
            int j = kPiLanes[i];
            uint64_t next = st[j];
            st[j] = std::rotl(carry, kRotations[i]);
            carry = next;
        }
        // chi
        for (int j = 0; j < 25; j += 5) {
            for (int i = 0; i < 5; ++i) bc[i] = st[j + i];
            for (int i = 0; i < 5; ++i) st[j + i] ^= (~bc[(i + 1) % 5]) & bc[(i + 2) % 5];
        }
        // iota
        st[0] ^= rc;
    }
}

void Keccak256Hasher::absorb_block() {
    for (std::size_t lane = 0; lane < kRate / 8; ++lane) {
        uint64_t v = 0;
        for (int b = 7; b >= 0; --b) v = (v << 8) | buffer_[lane * 8 + static_cast<std::size_t>(b)];
        state_[lane] ^= v;
    }
    keccak_f1600(state_);
    buffered_ = 0;
}

void Keccak256Hasher::update(ByteView data) {
    while (!data.empty()) {
        std::size_t take = std::min(kRate - buffered_, data.size());
        std::copy_n(data.begin(), take, buffer_.begin() + static_cast<std::ptrdiff_t>(buffered_));
        buffered_ += take;
        data = data.subspan(take);
        if (buffered_ == kRate) absorb_block();
    }
}

Hash32 Keccak256Hasher::finish() {
    std::fill(buffer_.begin() + static_cast<std::ptrdiff_t>(buffered_), buffer_.end(), uint8_t{0});
    buffer_[buffered_] ^= padding_;
    buffer_[kRate - 1] ^= 0x80;
    absorb_block();

    Hash32 out;
    for (std::size_t i = 0; i < Hash32::size; ++i) {
        out.bytes[i] = static_cast<uint8_t>(state_[i / 8] >> (8 * (i % 8)));
    }
    state_.fill(0);
    return out;
}

}  // namespace movsc::crypto
