// Copyright 2026 The movsc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <vector>

#include <json.hpp>

#include "movsc/bytes.hpp"
#include "movsc/call.hpp"
#include "movsc/contract.hpp"
#include "movsc/crypto.hpp"
#include "movsc/error.hpp"
#include "movsc/identity.hpp"

namespace movsc {

// ---------------------------------------------------------------------------
// Time

class Clock {
  public:
    virtual ~Clock() = default;
    //! Seconds since the Unix epoch.
    virtual uint64_t now() = 0;
};

class SystemClock final : public Clock {
  public:
    uint64_t now() override;
};

//! Deterministic clock: every reading returns the current value and then
//! advances it by `step`.
class MockClock final : public Clock {
  public:
    explicit MockClock(uint64_t start = 1'700'000'000, uint64_t step = 1) : t_{start}, step_{step} {}
    uint64_t now() override { return t_.fetch_add(step_); }
    void advance(uint64_t seconds) { t_ += seconds; }
    uint64_t peek() const { return t_; }

  private:
    std::atomic<uint64_t> t_;
    uint64_t step_;
};

// ---------------------------------------------------------------------------
// Chain data

//! Ledger-level operation that adds an identity to the public-key directory.
inline constexpr std::string_view kRegisterIdentityOp = "register_identity";

struct Transaction {
    Address sender;
    uint64_t nonce{0};
    ContractCall call;
    crypto::Signature signature;

    //! Canonical bytes covered by the signature.
    Bytes signing_payload() const;
    void encode(Writer& w) const;
    static Transaction decode(Reader& r);
    nlohmann::json to_json() const;

    static Transaction make(const Identity& signer, uint64_t nonce, ContractCall call);
    static Transaction registration(const Identity& id, uint64_t nonce = 0);

    friend bool operator==(const Transaction&, const Transaction&) = default;
};

//! A transaction together with the recorded outcome of applying it.
struct TxRecord {
    Transaction tx;
    CallResult result;

    friend bool operator==(const TxRecord&, const TxRecord&) = default;
};

struct Block {
    uint64_t height{0};
    Hash32 prev_hash;
    Hash32 tx_root;
    uint64_t timestamp{0};
    Hash32 block_hash;
    std::vector<TxRecord> entries;

    Hash32 compute_tx_root() const;
    Hash32 compute_hash() const;

    void encode(Writer& w) const;
    Bytes encode() const;
    static Block decode(ByteView bytes);
    nlohmann::json to_json() const;

    friend bool operator==(const Block&, const Block&) = default;
};

struct Receipt {
    uint64_t block_height{0};
    uint32_t tx_index{0};
    CallResult result;

    nlohmann::json to_json() const;
};

//! Outcome of one transaction in a batch: a receipt, or the reason it was
//! refused before reaching the contract.
struct BatchOutcome {
    std::optional<Receipt> receipt;
    std::optional<ErrorCode> rejected;
};

// ---------------------------------------------------------------------------
// Replicated state

//! Everything derived from the transaction log: directory, nonces, contract.
class WorldState {
  public:
    //! Authenticates and applies one transaction. Throws Error for
    //! BadSignature / BadNonce / UnknownAddress / DuplicateAddress; contract
    //! failures come back inside the result.
    CallResult apply(const Transaction& tx, uint64_t time);

    const Directory& directory() const { return directory_; }
    const Contract& contract() const { return contract_; }
    //! Smallest nonce the sender may use next.
    uint64_t next_nonce(const Address& sender) const;

    Bytes serialize() const;

    //! Re-applies a block log from genesis. Throws kMalformedData if a
    //! recorded result differs from the recomputed one.
    static WorldState replay(std::span<const Block> blocks);

  private:
    CallResult register_identity(const Transaction& tx);
    void check_nonce(const Transaction& tx) const;

    Directory directory_;
    std::map<Address, uint64_t> last_nonce_;
    Contract contract_;
};

// ---------------------------------------------------------------------------

//! Checks genesis, height sequence, hash links, tx roots, block hashes and
//! timestamp monotonicity.
bool verify_blocks(std::span<const Block> blocks);
//! Parses a chain file image (sequence of u32-length-prefixed blocks).
std::vector<Block> decode_chain(ByteView file);
//! False on any parse failure or failed verification.
bool verify_chain_bytes(ByteView file);

//! Single-node append-only ledger. Writers are serialized; sealed blocks are
//! immutable and may be read from any thread.
class Ledger {
  public:
    explicit Ledger(std::shared_ptr<Clock> clock = std::make_shared<SystemClock>());

    //! Opens the chain file at path, replaying it, or creates it with a
    //! fresh genesis block. New blocks are appended to the file.
    static std::unique_ptr<Ledger> open(const std::filesystem::path& path,
                                        std::shared_ptr<Clock> clock = std::make_shared<SystemClock>());

    //! Loads blocks appended to the chain file by other processes. Returns
    //! whether anything changed. File-backed writers sync before appending.
    bool sync();

    Address register_identity(const Identity& id);
    Receipt submit(const Transaction& tx);
    //! Seals all accepted transactions of the batch into one block.
    std::vector<BatchOutcome> submit_batch(std::span<const Transaction> txs);

    crypto::BoxPublicKey get_public_key(const Address& address) const;
    std::optional<DirectoryEntry> lookup(const Address& address) const;
    uint64_t next_nonce(const Address& address) const;

    bool verify_chain() const;
    uint64_t height() const;
    std::vector<Block> blocks() const;
    Block block(uint64_t height) const;

    //! Runs f with shared access to the current state.
    template <class F>
    auto read(F&& f) const {
        std::shared_lock lock{mu_};
        return f(static_cast<const WorldState&>(state_));
    }

    Bytes state_bytes() const;
    //! Byte image of the persisted chain file.
    Bytes chain_bytes() const;
    nlohmann::json export_json() const;

  private:
    void persist(const Block& b);
    void sync_locked();

    mutable std::shared_mutex mu_;
    std::shared_ptr<Clock> clock_;
    std::vector<Block> blocks_;
    WorldState state_;
    std::optional<std::filesystem::path> path_;
};

nlohmann::json chain_to_json(std::span<const Block> blocks);

}  // namespace movsc
