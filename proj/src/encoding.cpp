// Copyright 2026 The movsc Authors
// SPDX-License-Identifier: Apache-2.0

#include "movsc/encoding.hpp"

#include <limits>

namespace movsc {

Writer& Writer::u32(uint32_t v) {
    for (int shift = 24; shift >= 0; shift -= 8) out_.push_back(static_cast<uint8_t>(v >> shift));
    return *this;
}

Writer& Writer::u64(uint64_t v) {
    for (int shift = 56; shift >= 0; shift -= 8) out_.push_back(static_cast<uint8_t>(v >> shift));
    return *this;
}

Writer& Writer::bytes(ByteView v) {
    if (v.size() > std::numeric_limits<uint32_t>::max()) {
        throw Error{ErrorCode::kMalformedData, "byte string too long to encode"};
    }
    u32(static_cast<uint32_t>(v.size()));
    return raw(v);
}

ByteView Reader::raw(std::size_t n) {
    if (remaining() < n) throw Error{ErrorCode::kMalformedData, "truncated input"};
    auto out = in_.subspan(pos_, n);
    pos_ += n;
    return out;
}

uint8_t Reader::u8() { return raw(1)[0]; }

bool Reader::boolean() {
    uint8_t v = u8();
    if (v > 1) throw Error{ErrorCode::kMalformedData, "non-canonical boolean"};
    return v == 1;
}

uint32_t Reader::u32() {
    auto v = raw(4);
    uint32_t out = 0;
    for (uint8_t b : v) out = (out << 8) | b;
    return out;
}

uint64_t Reader::u64() {
    auto v = raw(8);
    uint64_t out = 0;
    for (uint8_t b : v) out = (out << 8) | b;
    return out;
}

Bytes Reader::bytes() {
    uint32_t n = u32();
    auto v = raw(n);
    return {v.begin(), v.end()};
}

std::string Reader::str() {
    uint32_t n = u32();
    return to_string(raw(n));
}

void Reader::expect_end() const {
    if (!at_end()) throw Error{ErrorCode::kMalformedData, "trailing bytes"};
}

}  // namespace movsc
