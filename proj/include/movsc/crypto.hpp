// Copyright 2026 The movsc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <mutex>
#include <string_view>

#include "movsc/bytes.hpp"
#include "movsc/encoding.hpp"

namespace movsc::crypto {

// ---------------------------------------------------------------------------
// Hashing

enum class HashAlgorithm {
    kSha256,
    kKeccak256,  // original Keccak padding (0x01), as used by Ethereum
    kSha3_256,   // FIPS-202 padding (0x06)
};

//! Registered algorithm names as they appear in the code registry.
inline constexpr std::string_view kSha256Id = "SHA256";
inline constexpr std::string_view kKeccak256Id = "KECCAK256";

//! Maps "SHA256" / "KECCAK256" / "SHA3_256" to an algorithm; throws
//! kUnsupportedAlgorithm otherwise.
HashAlgorithm parse_algorithm(std::string_view code_id);

class Hasher {
  public:
    virtual ~Hasher() = default;
    virtual void update(ByteView data) = 0;
    virtual Hash32 finish() = 0;
};

std::unique_ptr<Hasher> make_hasher(HashAlgorithm algorithm);

Hash32 sha256(ByteView data);
Hash32 keccak256(ByteView data);
Hash32 sha3_256(ByteView data);
Hash32 hash(HashAlgorithm algorithm, ByteView data);

//! Keccak sponge with a 1088-bit rate over Keccak-f[1600].
class Keccak256Hasher final : public Hasher {
  public:
    explicit Keccak256Hasher(uint8_t domain_padding = 0x01) : padding_{domain_padding} {}

    void update(ByteView data) override;
    Hash32 finish() override;

  private:
    static constexpr std::size_t kRate = 136;

    void absorb_block();

    std::array<uint64_t, 25> state_{};
    std::array<uint8_t, kRate> buffer_{};
    std::size_t buffered_{0};
    uint8_t padding_;
};

void keccak_f1600(std::array<uint64_t, 25>& state);

// ---------------------------------------------------------------------------
// Randomness

class Rng {
  public:
    virtual ~Rng() = default;
    virtual void fill(std::span<uint8_t> out) = 0;

    template <class T>
    T fixed() {
        T out;
        fill(out.bytes);
        return out;
    }
    Bytes bytes(std::size_t n) {
        Bytes out(n);
        fill(out);
        return out;
    }
    uint64_t u64();
    //! Uniform in [0, bound).
    uint64_t below(uint64_t bound);
};

//! Operating-system CSPRNG.
class SystemRng final : public Rng {
  public:
    SystemRng();
    void fill(std::span<uint8_t> out) override;
};

//! Deterministic stream for simulations: block i is ChaCha20 keyed by
//! SHA-256(seed) with counter i. Thread-safe.
class SeededRng final : public Rng {
  public:
    explicit SeededRng(uint64_t seed);
    void fill(std::span<uint8_t> out) override;

  private:
    std::mutex mu_;
    Hash32 key_;
    uint64_t counter_{0};
};

//! Initializes libsodium once; throws kEntropyUnavailable if that fails.
void ensure_initialized();

// ---------------------------------------------------------------------------
// Secret commitments

struct SecretTag {};
using SecretPreimage = FixedBytes<32, SecretTag>;

struct Secret {
    SecretPreimage preimage;
    Hash32 commitment;
};

Hash32 commit(const SecretPreimage& preimage);
Secret generate_secret(Rng& rng);

// ---------------------------------------------------------------------------
// Signatures (Ed25519)

struct SignPublicTag {};
struct SignSecretTag {};
struct SignatureTag {};
using SignPublicKey = FixedBytes<32, SignPublicTag>;
using SignSecretKey = FixedBytes<64, SignSecretTag>;
using Signature = FixedBytes<64, SignatureTag>;

struct SigningKeyPair {
    SignPublicKey public_key;
    SignSecretKey secret_key;
};

SigningKeyPair signing_keypair_from_seed(const Hash32& seed);
Signature sign(ByteView message, const SignSecretKey& key);
bool verify(ByteView message, const Signature& signature, const SignPublicKey& key);

// ---------------------------------------------------------------------------
// Hybrid public-key encryption (X25519 + XSalsa20-Poly1305)

struct BoxPublicTag {};
struct BoxSecretTag {};
struct NonceTag {};
struct MacTag {};
using BoxPublicKey = FixedBytes<32, BoxPublicTag>;
using BoxSecretKey = FixedBytes<32, BoxSecretTag>;
using Nonce = FixedBytes<24, NonceTag>;
using Mac = FixedBytes<16, MacTag>;

struct EncryptionKeyPair {
    BoxPublicKey public_key;
    BoxSecretKey secret_key;
};

EncryptionKeyPair encryption_keypair_from_seed(const Hash32& seed);

struct Envelope {
    BoxPublicKey ephemeral_key;
    Nonce nonce;
    Bytes ciphertext;
    Mac tag;

    Bytes encode() const;
    static Envelope decode(ByteView bytes);

    friend bool operator==(const Envelope&, const Envelope&) = default;
};

//! Seals plaintext for the recipient with a fresh ephemeral key drawn from rng.
Envelope encrypt(ByteView plaintext, const BoxPublicKey& recipient, Rng& rng);
//! Throws kDecryptFailure for a foreign key or a modified envelope.
Bytes decrypt(const Envelope& envelope, const BoxSecretKey& key);

}  // namespace movsc::crypto
