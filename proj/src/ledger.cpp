// Copyright 2026 The movsc Authors
// SPDX-License-Identifier: Apache-2.0

#include "movsc/ledger.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <chrono>
#include <fstream>
#include <iterator>

namespace movsc {

namespace {

    //! Advisory lock on `<chain>.lock`, shared between processes using the file.
    class ChainFileLock {
      public:
        ChainFileLock(const std::filesystem::path& chain, bool exclusive) {
            auto path = chain.string() + ".lock";
            fd_ = ::open(path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
            if (fd_ < 0 || ::flock(fd_, exclusive ? LOCK_EX : LOCK_SH) != 0) {
                if (fd_ >= 0) ::close(fd_);
                throw Error{ErrorCode::kIoFailure, "cannot lock " + path};
            }
        }
        ~ChainFileLock() {
            ::flock(fd_, LOCK_UN);
            ::close(fd_);
        }
        ChainFileLock(const ChainFileLock&) = delete;
        ChainFileLock& operator=(const ChainFileLock&) = delete;

      private:
        int fd_{-1};
    };

    Bytes read_file(const std::filesystem::path& path) {
        std::ifstream in{path, std::ios::binary};
        if (!in) throw Error{ErrorCode::kIoFailure, "cannot read " + path.string()};
        return Bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    }

}  // namespace

uint64_t SystemClock::now() {
    return static_cast<uint64_t>(
        std::chrono::duration_cast<std::chrono::seconds>(std::chrono::system_clock::now().time_since_epoch())
            .count());
}

// ---------------------------------------------------------------------------

Bytes Transaction::signing_payload() const {
    Writer w;
    w.str("movsc-tx/1").fixed(sender).u64(nonce);
    call.encode(w);
    return std::move(w).take();
}

void Transaction::encode(Writer& w) const {
    w.fixed(sender).u64(nonce);
    call.encode(w);
    w.fixed(signature);
}

Transaction Transaction::decode(Reader& r) {
    Transaction tx;
    tx.sender = r.fixed<Address>();
    tx.nonce = r.u64();
    tx.call = ContractCall::decode(r);
    tx.signature = r.fixed<crypto::Signature>();
    return tx;
}

nlohmann::json Transaction::to_json() const {
    return {{"sender", sender.hex()}, {"nonce", nonce}, {"call", call.to_json()}, {"signature", signature.hex()}};
}

Transaction Transaction::make(const Identity& signer, uint64_t nonce, ContractCall call) {
    Transaction tx;
    tx.sender = signer.address();
    tx.nonce = nonce;
    tx.call = std::move(call);
    tx.signature = crypto::sign(tx.signing_payload(), signer.sign.secret_key);
    return tx;
}

Transaction Transaction::registration(const Identity& id, uint64_t nonce) {
    auto call = CallBuilder{std::string{kRegisterIdentityOp}}
                    .arg(id.sign.public_key)
                    .arg(id.enc.public_key)
                    .arg(static_cast<uint64_t>(id.role))
                    .build();
    return make(id, nonce, std::move(call));
}

// ---------------------------------------------------------------------------

Hash32 Block::compute_tx_root() const {
    Writer w;
    w.str("movsc-txs/1").u32(static_cast<uint32_t>(entries.size()));
    for (const auto& e : entries) {
        e.tx.encode(w);
        e.result.encode(w);
    }
    return crypto::sha256(w.data());
}

Hash32 Block::compute_hash() const {
    Writer w;
    w.str("movsc-block/1").u64(height).fixed(prev_hash).fixed(tx_root).u64(timestamp);
    return crypto::sha256(w.data());
}

void Block::encode(Writer& w) const {
    w.u64(height).fixed(prev_hash).fixed(tx_root).u64(timestamp).fixed(block_hash);
    w.u32(static_cast<uint32_t>(entries.size()));
    for (const auto& e : entries) {
        e.tx.encode(w);
        e.result.encode(w);
    }
}

Bytes Block::encode() const {
    Writer w;
    encode(w);
    return std::move(w).take();
}

Block Block::decode(ByteView bytes) {
    Reader r{bytes};
    Block b;
    b.height = r.u64();
    b.prev_hash = r.fixed<Hash32>();
    b.tx_root = r.fixed<Hash32>();
    b.timestamp = r.u64();
    b.block_hash = r.fixed<Hash32>();
    uint32_t n = r.u32();
    if (n > r.remaining()) throw Error{ErrorCode::kMalformedData, "entry count exceeds input"};
    for (uint32_t i = 0; i < n; ++i) {
        TxRecord e;
        e.tx = Transaction::decode(r);
        e.result = CallResult::decode(r);
        b.entries.push_back(std::move(e));
    }
    r.expect_end();
    return b;
}

nlohmann::json Block::to_json() const {
    nlohmann::json txs = nlohmann::json::array();
    for (const auto& e : entries) {
        auto j = e.tx.to_json();
        j["result"] = e.result.to_json();
        txs.push_back(std::move(j));
    }
    return {{"height", height},       {"prev_hash", prev_hash.hex()},   {"tx_root", tx_root.hex()},
            {"timestamp", timestamp}, {"block_hash", block_hash.hex()}, {"transactions", std::move(txs)}};
}

nlohmann::json Receipt::to_json() const {
    return {{"block_height", block_height}, {"tx_index", tx_index}, {"result", result.to_json()}};
}

// ---------------------------------------------------------------------------

uint64_t WorldState::next_nonce(const Address& sender) const {
    auto it = last_nonce_.find(sender);
    return it == last_nonce_.end() ? 0 : it->second + 1;
}

void WorldState::check_nonce(const Transaction& tx) const {
    auto it = last_nonce_.find(tx.sender);
    if (it != last_nonce_.end() && tx.nonce <= it->second) {
        throw Error{ErrorCode::kBadNonce, "nonce " + std::to_string(tx.nonce) + " already used"};
    }
}

CallResult WorldState::register_identity(const Transaction& tx) {
    const auto& args = tx.call.args;
    auto malformed = [] { return Error{ErrorCode::kMalformedData, "malformed identity registration"}; };
    if (args.size() != 3) throw malformed();
    const auto* sign_raw = std::get_if<Bytes>(&args[0]);
    const auto* enc_raw = std::get_if<Bytes>(&args[1]);
    const auto* role_raw = std::get_if<uint64_t>(&args[2]);
    if (!sign_raw || !enc_raw || !role_raw || *role_raw > 2) throw malformed();
    auto sign_key = crypto::SignPublicKey::from_view(*sign_raw);
    auto enc_key = crypto::BoxPublicKey::from_view(*enc_raw);
    if (!sign_key || !enc_key) throw malformed();

    if (derive_address(*sign_key) != tx.sender || !crypto::verify(tx.signing_payload(), tx.signature, *sign_key)) {
        throw Error{ErrorCode::kBadSignature, "registration not signed by the registered key"};
    }
    if (directory_.contains(tx.sender)) {
        throw Error{ErrorCode::kDuplicateAddress, "address already registered: " + tx.sender.hex()};
    }
    check_nonce(tx);
    directory_.add(DirectoryEntry{tx.sender, *sign_key, *enc_key, static_cast<Role>(*role_raw)});
    last_nonce_[tx.sender] = tx.nonce;
    return CallResult::success(tx.sender.to_vector());
}

CallResult WorldState::apply(const Transaction& tx, uint64_t time) {
    if (tx.call.op == kRegisterIdentityOp) return register_identity(tx);

    const auto* entry = directory_.find(tx.sender);
    if (!entry) throw Error{ErrorCode::kUnknownAddress, "sender not registered: " + tx.sender.hex()};
    if (!crypto::verify(tx.signing_payload(), tx.signature, entry->sign_key)) {
        throw Error{ErrorCode::kBadSignature, "signature does not verify"};
    }
    check_nonce(tx);
    last_nonce_[tx.sender] = tx.nonce;
    return contract_.apply(tx.call, CallContext{tx.sender, time, directory_});
}

Bytes WorldState::serialize() const {
    Writer w;
    w.str("movsc-world-state/1");
    directory_.encode(w);
    w.u32(static_cast<uint32_t>(last_nonce_.size()));
    for (const auto& [a, n] : last_nonce_) w.fixed(a).u64(n);
    w.raw(contract_.serialize());
    return std::move(w).take();
}

WorldState WorldState::replay(std::span<const Block> blocks) {
    WorldState state;
    for (const auto& b : blocks) {
        for (const auto& e : b.entries) {
            CallResult r;
            try {
                r = state.apply(e.tx, b.timestamp);
            } catch (const Error& err) {
                throw Error{ErrorCode::kMalformedData, std::string{"recorded transaction is invalid: "} + err.what()};
            }
            if (!(r == e.result)) {
                throw Error{ErrorCode::kMalformedData,
                            "replayed result differs at block " + std::to_string(b.height)};
            }
        }
    }
    return state;
}

// ---------------------------------------------------------------------------

bool verify_blocks(std::span<const Block> blocks) {
    if (blocks.empty()) return false;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        const auto& b = blocks[i];
        if (b.height != i) return false;
        if (i == 0) {
            if (!b.prev_hash.is_zero()) return false;
        } else {
            if (b.prev_hash != blocks[i - 1].block_hash) return false;
            if (b.timestamp < blocks[i - 1].timestamp) return false;
        }
        if (b.compute_tx_root() != b.tx_root) return false;
        if (b.compute_hash() != b.block_hash) return false;
    }
    return true;
}

std::vector<Block> decode_chain(ByteView file) {
    Reader r{file};
    std::vector<Block> out;
    while (!r.at_end()) {
        uint32_t len = r.u32();
        out.push_back(Block::decode(r.raw(len)));
    }
    return out;
}

bool verify_chain_bytes(ByteView file) {
    try {
        return verify_blocks(decode_chain(file));
    } catch (const Error&) {
        return false;
    }
}

// ---------------------------------------------------------------------------

Ledger::Ledger(std::shared_ptr<Clock> clock) : clock_{std::move(clock)} {
    Block genesis;
    genesis.timestamp = clock_->now();
    genesis.tx_root = genesis.compute_tx_root();
    genesis.block_hash = genesis.compute_hash();
    blocks_.push_back(std::move(genesis));
}

std::unique_ptr<Ledger> Ledger::open(const std::filesystem::path& path, std::shared_ptr<Clock> clock) {
    auto ledger = std::make_unique<Ledger>(std::move(clock));
    ChainFileLock file_lock{path, true};
    if (std::filesystem::exists(path) && std::filesystem::file_size(path) > 0) {
        auto blocks = decode_chain(read_file(path));
        if (!verify_blocks(blocks)) throw Error{ErrorCode::kMalformedData, "chain file fails verification"};
        ledger->state_ = WorldState::replay(blocks);
        ledger->blocks_ = std::move(blocks);
        ledger->path_ = path;
    } else {
        ledger->path_ = path;
        ledger->persist(ledger->blocks_.front());
    }
    return ledger;
}

void Ledger::persist(const Block& b) {
    if (!path_) return;
    std::ofstream out{*path_, std::ios::binary | std::ios::app};
    Writer w;
    auto encoded = b.encode();
    w.u32(static_cast<uint32_t>(encoded.size())).raw(encoded);
    out.write(reinterpret_cast<const char*>(w.data().data()), static_cast<std::streamsize>(w.data().size()));
    out.flush();
    if (!out) throw Error{ErrorCode::kIoFailure, "cannot append to chain file"};
}

void Ledger::sync_locked() {
    auto blocks = decode_chain(read_file(*path_));
    if (blocks.size() == blocks_.size()) return;
    if (blocks.size() < blocks_.size() || blocks[blocks_.size() - 1].block_hash != blocks_.back().block_hash) {
        throw Error{ErrorCode::kMalformedData, "chain file diverged from the loaded chain"};
    }
    if (!verify_blocks(blocks)) throw Error{ErrorCode::kMalformedData, "chain file fails verification"};
    state_ = WorldState::replay(blocks);
    blocks_ = std::move(blocks);
}

bool Ledger::sync() {
    if (!path_) return false;
    ChainFileLock file_lock{*path_, false};
    std::unique_lock lock{mu_};
    auto before = blocks_.size();
    sync_locked();
    return blocks_.size() != before;
}

std::vector<BatchOutcome> Ledger::submit_batch(std::span<const Transaction> txs) {
    std::optional<ChainFileLock> file_lock;
    if (path_) file_lock.emplace(*path_, true);
    std::unique_lock lock{mu_};
    std::optional<WorldState> snapshot;
    if (path_) {
        sync_locked();
        snapshot = state_;
    }
    // The block time is fixed before application so the contract sees the
    // same time the block records.
    const uint64_t time = std::max(blocks_.back().timestamp, clock_->now());
    std::vector<BatchOutcome> outcomes;
    std::vector<TxRecord> entries;
    for (const auto& tx : txs) {
        try {
            auto result = state_.apply(tx, time);
            outcomes.push_back({Receipt{blocks_.back().height + 1, static_cast<uint32_t>(entries.size()), result}, {}});
            entries.push_back({tx, std::move(result)});
        } catch (const Error& e) {
            outcomes.push_back({std::nullopt, e.code()});
        }
    }
    if (entries.empty()) return outcomes;

    const auto& prev = blocks_.back();
    Block b;
    b.height = prev.height + 1;
    b.prev_hash = prev.block_hash;
    b.entries = std::move(entries);
    b.tx_root = b.compute_tx_root();
    b.timestamp = time;
    b.block_hash = b.compute_hash();
    try {
        persist(b);
    } catch (...) {
        state_ = std::move(*snapshot);
        throw;
    }
    blocks_.push_back(std::move(b));
    return outcomes;
}

Receipt Ledger::submit(const Transaction& tx) {
    auto outcome = submit_batch(std::span{&tx, 1}).front();
    if (outcome.rejected) throw Error{*outcome.rejected};
    return *outcome.receipt;
}

Address Ledger::register_identity(const Identity& id) {
    submit(Transaction::registration(id, next_nonce(id.address())));
    return id.address();
}

crypto::BoxPublicKey Ledger::get_public_key(const Address& address) const {
    auto entry = lookup(address);
    if (!entry) throw Error{ErrorCode::kUnknownAddress, "unknown address " + address.hex()};
    return entry->enc_key;
}

std::optional<DirectoryEntry> Ledger::lookup(const Address& address) const {
    std::shared_lock lock{mu_};
    const auto* e = state_.directory().find(address);
    if (!e) return std::nullopt;
    return *e;
}

uint64_t Ledger::next_nonce(const Address& address) const {
    std::shared_lock lock{mu_};
    return state_.next_nonce(address);
}

bool Ledger::verify_chain() const {
    std::shared_lock lock{mu_};
    return verify_blocks(blocks_);
}

uint64_t Ledger::height() const {
    std::shared_lock lock{mu_};
    return blocks_.back().height;
}

std::vector<Block> Ledger::blocks() const {
    std::shared_lock lock{mu_};
    return blocks_;
}

Block Ledger::block(uint64_t height) const {
    std::shared_lock lock{mu_};
    if (height >= blocks_.size()) throw Error{ErrorCode::kNotFound, "no block at height " + std::to_string(height)};
    return blocks_[height];
}

Bytes Ledger::state_bytes() const {
    std::shared_lock lock{mu_};
    return state_.serialize();
}

Bytes Ledger::chain_bytes() const {
    std::shared_lock lock{mu_};
    Writer w;
    for (const auto& b : blocks_) {
        auto encoded = b.encode();
        w.u32(static_cast<uint32_t>(encoded.size())).raw(encoded);
    }
    return std::move(w).take();
}

nlohmann::json chain_to_json(std::span<const Block> blocks) {
    nlohmann::json j{{"blocks", nlohmann::json::array()}};
    for (const auto& b : blocks) j["blocks"].push_back(b.to_json());
    return j;
}

nlohmann::json Ledger::export_json() const {
    std::shared_lock lock{mu_};
    return chain_to_json(blocks_);
}

}  // namespace movsc
