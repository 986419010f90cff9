// Copyright 2026 The movsc Authors
// SPDX-License-Identifier: Apache-2.0

#include "movsc/crypto.hpp"

#include <sodium.h>

#include "movsc/error.hpp"

namespace movsc::crypto {

void ensure_initialized() {
    static const int status = sodium_init();
    if (status < 0) throw Error{ErrorCode::kEntropyUnavailable, "libsodium initialization failed"};
}

HashAlgorithm parse_algorithm(std::string_view code_id) {
    if (code_id == kSha256Id) return HashAlgorithm::kSha256;
    if (code_id == kKeccak256Id) return HashAlgorithm::kKeccak256;
    if (code_id == "SHA3_256") return HashAlgorithm::kSha3_256;
    throw Error{ErrorCode::kUnsupportedAlgorithm, "unsupported hash algorithm: " + std::string{code_id}};
}

namespace {

    class Sha256Hasher final : public Hasher {
      public:
        Sha256Hasher() {
            ensure_initialized();
            crypto_hash_sha256_init(&state_);
        }
        void update(ByteView data) override { crypto_hash_sha256_update(&state_, data.data(), data.size()); }
        Hash32 finish() override {
            Hash32 out;
            crypto_hash_sha256_final(&state_, out.bytes.data());
            return out;
        }

      private:
        crypto_hash_sha256_state state_{};
    };

}  // namespace

std::unique_ptr<Hasher> make_hasher(HashAlgorithm algorithm) {
    switch (algorithm) {
        case HashAlgorithm::kSha256: return std::make_unique<Sha256Hasher>();
        case HashAlgorithm::kKeccak256: return std::make_unique<Keccak256Hasher>(0x01);
        case HashAlgorithm::kSha3_256: return std::make_unique<Keccak256Hasher>(0x06);
    }
    throw Error{ErrorCode::kUnsupportedAlgorithm};
}

Hash32 hash(HashAlgorithm algorithm, ByteView data) {
    auto h = make_hasher(algorithm);
    h->update(data);
    return h->finish();
}

Hash32 sha256(ByteView data) { return hash(HashAlgorithm::kSha256, data); }
Hash32 keccak256(ByteView data) { return hash(HashAlgorithm::kKeccak256, data); }
Hash32 sha3_256(ByteView data) { return hash(HashAlgorithm::kSha3_256, data); }

// ---------------------------------------------------------------------------

uint64_t Rng::u64() {
    std::array<uint8_t, 8> buf{};
    fill(buf);
    uint64_t v = 0;
    for (uint8_t b : buf) v = (v << 8) | b;
    return v;
}

uint64_t Rng::below(uint64_t bound) {
    if (bound <= 1) return 0;
    // rejection sampling keeps the distribution exact
    const uint64_t limit = UINT64_MAX - (UINT64_MAX % bound);
    for (;;) {
        uint64_t v = u64();
        if (v < limit) return v % bound;
    }
}

SystemRng::SystemRng() { ensure_initialized(); }

void SystemRng::fill(std::span<uint8_t> out) { randombytes_buf(out.data(), out.size()); }

SeededRng::SeededRng(uint64_t seed) {
    ensure_initialized();
    key_ = sha256(Writer{}.str("movsc-seeded-rng").u64(seed).data());
}

void SeededRng::fill(std::span<uint8_t> out) {
    std::lock_guard lock{mu_};
    // A fresh ChaCha20 stream per call: the (key, counter) pair never repeats.
    std::array<uint8_t, crypto_stream_chacha20_NONCEBYTES> nonce{};
    uint64_t c = counter_++;
    for (std::size_t i = 0; i < nonce.size(); ++i) nonce[i] = static_cast<uint8_t>(c >> (8 * i));
    crypto_stream_chacha20(out.data(), out.size(), nonce.data(), key_.bytes.data());
}

// ---------------------------------------------------------------------------

Hash32 commit(const SecretPreimage& preimage) { return sha256(preimage.view()); }

Secret generate_secret(Rng& rng) {
    Secret s;
    s.preimage = rng.fixed<SecretPreimage>();
    s.commitment = commit(s.preimage);
    return s;
}

// ---------------------------------------------------------------------------

SigningKeyPair signing_keypair_from_seed(const Hash32& seed) {
    ensure_initialized();
    SigningKeyPair kp;
    crypto_sign_seed_keypair(kp.public_key.bytes.data(), kp.secret_key.bytes.data(), seed.bytes.data());
    return kp;
}

Signature sign(ByteView message, const SignSecretKey& key) {
    ensure_initialized();
    Signature sig;
    crypto_sign_detached(sig.bytes.data(), nullptr, message.data(), message.size(), key.bytes.data());
    return sig;
}

bool verify(ByteView message, const Signature& signature, const SignPublicKey& key) {
    ensure_initialized();
    return crypto_sign_verify_detached(signature.bytes.data(), message.data(), message.size(),
                                       key.bytes.data()) == 0;
}

// ---------------------------------------------------------------------------

EncryptionKeyPair encryption_keypair_from_seed(const Hash32& seed) {
    ensure_initialized();
    EncryptionKeyPair kp;
    crypto_box_seed_keypair(kp.public_key.bytes.data(), kp.secret_key.bytes.data(), seed.bytes.data());
    return kp;
}

Bytes Envelope::encode() const {
    Writer w;
    w.fixed(ephemeral_key).fixed(nonce).bytes(ciphertext).fixed(tag);
    return std::move(w).take();
}

Envelope Envelope::decode(ByteView bytes) {
    Reader r{bytes};
    Envelope e;
    e.ephemeral_key = r.fixed<BoxPublicKey>();
    e.nonce = r.fixed<Nonce>();
    e.ciphertext = r.bytes();
    e.tag = r.fixed<Mac>();
    r.expect_end();
    return e;
}

Envelope encrypt(ByteView plaintext, const BoxPublicKey& recipient, Rng& rng) {
    ensure_initialized();
    auto ephemeral = encryption_keypair_from_seed(rng.fixed<Hash32>());
    Envelope e;
    e.ephemeral_key = ephemeral.public_key;
    e.nonce = rng.fixed<Nonce>();
    e.ciphertext.resize(plaintext.size());
    if (crypto_box_detached(e.ciphertext.data(), e.tag.bytes.data(), plaintext.data(), plaintext.size(),
                            e.nonce.bytes.data(), recipient.bytes.data(), ephemeral.secret_key.bytes.data()) != 0) {
        throw Error{ErrorCode::kMalformedData, "recipient key rejected"};
    }
    sodium_memzero(ephemeral.secret_key.bytes.data(), ephemeral.secret_key.bytes.size());
    return e;
}

Bytes decrypt(const Envelope& envelope, const BoxSecretKey& key) {
    ensure_initialized();
    Bytes plain(envelope.ciphertext.size());
    if (crypto_box_open_detached(plain.data(), envelope.ciphertext.data(), envelope.tag.bytes.data(),
                                 envelope.ciphertext.size(), envelope.nonce.bytes.data(),
                                 envelope.ephemeral_key.bytes.data(), key.bytes.data()) != 0) {
        throw Error{ErrorCode::kDecryptFailure, "envelope did not authenticate"};
    }
    return plain;
}

}  // namespace movsc::crypto
