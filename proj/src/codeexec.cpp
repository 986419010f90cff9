// Copyright 2026 The movsc Authors
// SPDX-License-Identifier: Apache-2.0

#include "movsc/codeexec.hpp"

#include <sodium.h>

#include <algorithm>
#include <array>
#include <charconv>

#include "movsc/error.hpp"

namespace movsc::codeexec {

std::size_t MemorySource::read(std::span<uint8_t> out) {
    std::size_t n = std::min(out.size(), data_.size() - pos_);
    std::copy_n(data_.begin() + static_cast<std::ptrdiff_t>(pos_), n, out.begin());
    pos_ += n;
    return n;
}

FileSource::FileSource(const std::filesystem::path& path) : in_{path, std::ios::binary} {
    if (!in_) throw Error{ErrorCode::kNotFound, "cannot open " + path.string()};
}

std::size_t FileSource::read(std::span<uint8_t> out) {
    in_.read(reinterpret_cast<char*>(out.data()), static_cast<std::streamsize>(out.size()));
    if (in_.bad()) throw Error{ErrorCode::kIoFailure, "read failed"};
    return static_cast<std::size_t>(in_.gcount());
}

PseudoRandomSource::PseudoRandomSource(uint64_t seed, uint64_t length) : length_{length} {
    crypto::ensure_initialized();
    key_ = crypto::sha256(Writer{}.str("movsc-prng-source").u64(seed).data());
}

std::size_t PseudoRandomSource::read(std::span<uint8_t> out) {
    std::size_t n = static_cast<std::size_t>(std::min<uint64_t>(out.size(), length_ - produced_));
    if (n == 0) return 0;
    // ChaCha20 (IETF) keystream addressed by 64-byte block index
    std::array<uint8_t, crypto_stream_chacha20_ietf_NONCEBYTES> nonce{};
    uint64_t block = produced_ / 64;
    std::size_t skip = static_cast<std::size_t>(produced_ % 64);
    uint32_t counter = static_cast<uint32_t>(block & 0xffffffffU);
    uint64_t high = block >> 32;
    for (std::size_t i = 0; i < 8; ++i) nonce[i] = static_cast<uint8_t>(high >> (8 * i));
    std::fill_n(out.begin(), n, uint8_t{0});
    if (skip == 0) {
        crypto_stream_chacha20_ietf_xor_ic(out.data(), out.data(), n, nonce.data(), counter, key_.bytes.data());
    } else {
        Bytes tmp(n + skip, 0);
        crypto_stream_chacha20_ietf_xor_ic(tmp.data(), tmp.data(), tmp.size(), nonce.data(), counter,
                                           key_.bytes.data());
        std::copy_n(tmp.begin() + static_cast<std::ptrdiff_t>(skip), n, out.begin());
    }
    produced_ += n;
    return n;
}

// ---------------------------------------------------------------------------

namespace {

    [[noreturn]] void unsupported(std::size_t line, const std::string& why) {
        throw Error{ErrorCode::kUnsupportedSource, "line " + std::to_string(line) + ": " + why};
    }

    std::optional<crypto::HashAlgorithm> algorithm_named(std::string_view name) {
        if (name == "sha256") return crypto::HashAlgorithm::kSha256;
        if (name == "keccak256") return crypto::HashAlgorithm::kKeccak256;
        if (name == "sha3_256") return crypto::HashAlgorithm::kSha3_256;
        return std::nullopt;
    }

    std::vector<std::string_view> split_words(std::string_view line) {
        std::vector<std::string_view> words;
        std::size_t i = 0;
        while (i < line.size()) {
            while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
            std::size_t start = i;
            while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
            if (i > start) words.push_back(line.substr(start, i - start));
        }
        return words;
    }

    Hash32 hash_stream(ByteSource& data, std::size_t chunk_size, crypto::HashAlgorithm algorithm,
                       std::chrono::steady_clock::time_point deadline) {
        auto hasher = crypto::make_hasher(algorithm);
        Bytes buf(chunk_size);
        for (;;) {
            if (std::chrono::steady_clock::now() > deadline) {
                throw Error{ErrorCode::kExecutionTimeout, "execution exceeded its time budget"};
            }
            std::size_t n = data.read(buf);
            if (n == 0) break;
            hasher->update(ByteView{buf}.first(n));
        }
        return hasher->finish();
    }

    class NativeHash final : public Transform {
      public:
        explicit NativeHash(crypto::HashAlgorithm algorithm) : algorithm_{algorithm} {}
        Hash32 run(ByteSource& data, std::chrono::steady_clock::time_point deadline) const override {
            return hash_stream(data, 1 << 16, algorithm_, deadline);
        }

      private:
        crypto::HashAlgorithm algorithm_;
    };

    class InterpretedPipeline final : public Transform {
      public:
        explicit InterpretedPipeline(Pipeline p) : pipeline_{std::move(p)} {}
        Hash32 run(ByteSource& data, std::chrono::steady_clock::time_point deadline) const override {
            auto digest = hash_stream(data, pipeline_.chunk_size, pipeline_.digest, deadline);
            for (auto algorithm : pipeline_.rehash) digest = crypto::hash(algorithm, digest.view());
            return digest;
        }

      private:
        Pipeline pipeline_;
    };

    constexpr Builtin kBuiltins[] = {
        {crypto::kSha256Id, "movsc-pipeline 1\nread 65536\ndigest sha256\nemit hex\n"},
        {crypto::kKeccak256Id, "movsc-pipeline 1\nread 65536\ndigest keccak256\nemit hex\n"},
    };

}  // namespace

Pipeline parse_pipeline(std::string_view source) {
    enum class Stage { kHeader, kRead, kDigest, kRehashOrEmit, kDone };
    Stage stage = Stage::kHeader;
    Pipeline p;
    std::size_t line_no = 0;

    while (!source.empty()) {
        auto nl = source.find('\n');
        auto line = source.substr(0, nl);
        source = nl == std::string_view::npos ? std::string_view{} : source.substr(nl + 1);
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

        if (stage == Stage::kHeader) {
            if (line != kPipelineHeader) unsupported(line_no, "expected header '" + std::string{kPipelineHeader} + "'");
            stage = Stage::kRead;
            continue;
        }
        auto words = split_words(line);
        if (words.empty() || words.front().starts_with('#')) continue;
        if (stage == Stage::kDone) unsupported(line_no, "statement after emit");
        if (words.size() != 2) unsupported(line_no, "expected '<keyword> <argument>'");
        auto keyword = words[0];
        auto arg = words[1];

        if (keyword == "read") {
            if (stage != Stage::kRead) unsupported(line_no, "read must come first and only once");
            std::size_t n = 0;
            auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), n);
            if (ec != std::errc{} || ptr != arg.data() + arg.size() || n == 0 || n > kMaxChunkSize) {
                unsupported(line_no, "chunk size must be an integer in [1, 16777216]");
            }
            p.chunk_size = n;
            stage = Stage::kDigest;
        } else if (keyword == "digest" || keyword == "rehash") {
            auto algorithm = algorithm_named(arg);
            if (!algorithm) unsupported(line_no, "unknown algorithm '" + std::string{arg} + "'");
            if (keyword == "digest") {
                if (stage != Stage::kDigest) unsupported(line_no, "digest must follow read");
                p.digest = *algorithm;
                stage = Stage::kRehashOrEmit;
            } else {
                if (stage != Stage::kRehashOrEmit) unsupported(line_no, "rehash must follow digest");
                p.rehash.push_back(*algorithm);
            }
        } else if (keyword == "emit") {
            if (stage != Stage::kRehashOrEmit) unsupported(line_no, "emit must follow digest");
            if (arg != "hex") unsupported(line_no, "only 'emit hex' is supported");
            stage = Stage::kDone;
        } else {
            unsupported(line_no, "unknown keyword '" + std::string{keyword} + "'");
        }
    }
    if (stage != Stage::kDone) unsupported(line_no, "program ends before 'emit hex'");
    return p;
}

std::span<const Builtin> builtins() { return kBuiltins; }

const Builtin* find_builtin(std::string_view code_id) {
    for (const auto& b : kBuiltins) {
        if (b.code_id == code_id) return &b;
    }
    return nullptr;
}

CodeEntry builtin_entry(const Builtin& b) {
    return CodeEntry{std::string{b.code_id}, CodeKind::kInlineSource, std::string{b.source},
                     crypto::sha256(as_bytes(b.source))};
}

ExecutableProgram materialize(const CodeEntry& entry, const CodeFetcher& fetch) {
    std::string source;
    if (entry.kind == CodeKind::kInlineSource) {
        source = entry.source;
    } else {
        if (!fetch) throw Error{ErrorCode::kFetchFailure, "no fetcher for external code " + entry.source};
        source = to_string(fetch(entry.source));
    }
    if (crypto::sha256(as_bytes(source)) != entry.integrity_hash) {
        throw Error{ErrorCode::kIntegrityMismatch, "code bytes do not match the registered hash for " + entry.code_id};
    }

    if (const auto* b = find_builtin(entry.code_id)) {
        if (crypto::sha256(as_bytes(b->source)) != entry.integrity_hash) {
            throw Error{ErrorCode::kIntegrityMismatch, "registered source differs from pinned builtin " + entry.code_id};
        }
        auto algorithm = crypto::parse_algorithm(b->code_id);
        return ExecutableProgram{entry.code_id, entry.integrity_hash, true, std::make_shared<NativeHash>(algorithm)};
    }
    return ExecutableProgram{entry.code_id, entry.integrity_hash, false,
                             std::make_shared<InterpretedPipeline>(parse_pipeline(source))};
}

Hash32 execute(const ExecutableProgram& program, ByteSource& data, const ExecutionOptions& options) {
    auto deadline = std::chrono::steady_clock::now() + options.timeout;
    return program.transform().run(data, deadline);
}

Hash32 execute(const ExecutableProgram& program, ByteView data, const ExecutionOptions& options) {
    MemorySource source{data};
    return execute(program, source, options);
}

}  // namespace movsc::codeexec
