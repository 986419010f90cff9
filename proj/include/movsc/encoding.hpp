// Copyright 2026 The movsc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Canonical binary encoding shared by every hashed or signed structure.
// Integers are big-endian and fixed width; variable-length byte strings and
// text carry a u32 length prefix. The layout is documented in docs/encoding.md.

#include <cstdint>
#include <string>
#include <string_view>

#include "movsc/bytes.hpp"
#include "movsc/error.hpp"

namespace movsc {

class Writer {
  public:
    Writer& u8(uint8_t v) {
        out_.push_back(v);
        return *this;
    }
    Writer& boolean(bool v) { return u8(v ? 1 : 0); }
    Writer& u32(uint32_t v);
    Writer& u64(uint64_t v);
    Writer& bytes(ByteView v);
    Writer& str(std::string_view v) { return bytes(as_bytes(v)); }
    //! Appends without a length prefix. Only for fixed-width fields.
    Writer& raw(ByteView v) {
        out_.insert(out_.end(), v.begin(), v.end());
        return *this;
    }
    template <std::size_t N, class Tag>
    Writer& fixed(const FixedBytes<N, Tag>& v) {
        return raw(v.view());
    }

    const Bytes& data() const& { return out_; }
    Bytes take() && { return std::move(out_); }

  private:
    Bytes out_;
};

//! Strict reader: any underflow or non-canonical value throws kMalformedData.
class Reader {
  public:
    explicit Reader(ByteView in) : in_{in} {}

    uint8_t u8();
    bool boolean();
    uint32_t u32();
    uint64_t u64();
    Bytes bytes();
    std::string str();
    ByteView raw(std::size_t n);
    template <class T>
    T fixed() {
        auto v = raw(T::size);
        return *T::from_view(v);
    }

    std::size_t remaining() const { return in_.size() - pos_; }
    bool at_end() const { return pos_ == in_.size(); }
    void expect_end() const;

  private:
    ByteView in_;
    std::size_t pos_{0};
};

}  // namespace movsc
