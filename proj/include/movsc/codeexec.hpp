// Copyright 2026 The movsc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "movsc/bytes.hpp"
#include "movsc/contract.hpp"
#include "movsc/crypto.hpp"

namespace movsc::codeexec {

// ---------------------------------------------------------------------------
// Byte streams

class ByteSource {
  public:
    virtual ~ByteSource() = default;
    //! Fills a prefix of out; returns 0 only at end of stream.
    virtual std::size_t read(std::span<uint8_t> out) = 0;
};

//! Non-owning view over memory.
class MemorySource final : public ByteSource {
  public:
    explicit MemorySource(ByteView data) : data_{data} {}
    std::size_t read(std::span<uint8_t> out) override;

  private:
    ByteView data_;
    std::size_t pos_{0};
};

class OwnedSource final : public ByteSource {
  public:
    explicit OwnedSource(Bytes data) : data_{std::move(data)}, view_{data_} {}
    std::size_t read(std::span<uint8_t> out) override { return view_.read(out); }

  private:
    Bytes data_;
    MemorySource view_;
};

class FileSource final : public ByteSource {
  public:
    //! Throws kNotFound if the file cannot be opened.
    explicit FileSource(const std::filesystem::path& path);
    std::size_t read(std::span<uint8_t> out) override;

  private:
    std::ifstream in_;
};

//! Deterministic pseudorandom stream of a fixed length, generated on the fly.
class PseudoRandomSource final : public ByteSource {
  public:
    PseudoRandomSource(uint64_t seed, uint64_t length);
    std::size_t read(std::span<uint8_t> out) override;

  private:
    Hash32 key_;
    uint64_t length_;
    uint64_t produced_{0};
};

// ---------------------------------------------------------------------------
// Pipeline mini-language (see docs/code-dsl.md)

struct Pipeline {
    std::size_t chunk_size{65536};
    crypto::HashAlgorithm digest{crypto::HashAlgorithm::kSha256};
    std::vector<crypto::HashAlgorithm> rehash;

    friend bool operator==(const Pipeline&, const Pipeline&) = default;
};

inline constexpr std::string_view kPipelineHeader = "movsc-pipeline 1";
inline constexpr std::size_t kMaxChunkSize = 16 * 1024 * 1024;

//! Throws kUnsupportedSource for anything outside the grammar.
Pipeline parse_pipeline(std::string_view source);

//! Builtin transforms pinned by the SHA-256 of their canonical source.
struct Builtin {
    std::string_view code_id;
    std::string_view source;
};

std::span<const Builtin> builtins();
const Builtin* find_builtin(std::string_view code_id);
//! Registry entry carrying the builtin's canonical inline source.
CodeEntry builtin_entry(const Builtin& b);

// ---------------------------------------------------------------------------

class Transform {
  public:
    virtual ~Transform() = default;
    //! deadline is checked between chunks; throws kExecutionTimeout.
    virtual Hash32 run(ByteSource& data, std::chrono::steady_clock::time_point deadline) const = 0;
};

//! Runnable form of a registered code entry. Immutable, safe to share.
class ExecutableProgram {
  public:
    ExecutableProgram(std::string code_id, Hash32 integrity_hash, bool builtin,
                      std::shared_ptr<const Transform> transform)
        : code_id_{std::move(code_id)},
          integrity_hash_{integrity_hash},
          builtin_{builtin},
          transform_{std::move(transform)} {}

    const std::string& code_id() const { return code_id_; }
    const Hash32& integrity_hash() const { return integrity_hash_; }
    bool is_builtin() const { return builtin_; }
    const Transform& transform() const { return *transform_; }

  private:
    std::string code_id_;
    Hash32 integrity_hash_;
    bool builtin_;
    std::shared_ptr<const Transform> transform_;
};

//! Retrieves the bytes behind an external code URL.
using CodeFetcher = std::function<Bytes(const std::string& url)>;

//! Resolves a registry entry into a program. Builtin names bind the native
//! transform after checking the on-chain source against the pinned hash;
//! other entries are interpreted as pipeline programs.
ExecutableProgram materialize(const CodeEntry& entry, const CodeFetcher& fetch = {});

struct ExecutionOptions {
    std::chrono::milliseconds timeout{std::chrono::seconds{300}};
};

Hash32 execute(const ExecutableProgram& program, ByteSource& data, const ExecutionOptions& options = {});
Hash32 execute(const ExecutableProgram& program, ByteView data, const ExecutionOptions& options = {});

}  // namespace movsc::codeexec
