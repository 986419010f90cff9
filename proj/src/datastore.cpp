// Copyright 2026 The movsc Authors
// SPDX-License-Identifier: Apache-2.0

#include "movsc/datastore.hpp"

#include <httplib.h>
#include <sodium.h>

#include <mutex>

#include "movsc/error.hpp"

namespace movsc {

namespace {

    Hash32 password_digest(std::string_view password) {
        return crypto::sha256(Writer{}.str("movsc-object-password").str(password).data());
    }

    //! Keeps the snapshot alive while it is being read.
    class SnapshotSource final : public codeexec::ByteSource {
      public:
        explicit SnapshotSource(std::shared_ptr<const Bytes> data) : data_{std::move(data)}, view_{*data_} {}
        std::size_t read(std::span<uint8_t> out) override { return view_.read(out); }

      private:
        std::shared_ptr<const Bytes> data_;
        codeexec::MemorySource view_;
    };

}  // namespace

DataStore::DataStore(crypto::Rng& rng, uint64_t capacity_bytes, bool simulation)
    : rng_{rng}, capacity_{capacity_bytes}, simulation_{simulation} {}

std::string DataStore::put(Bytes content, std::string_view password) {
    std::unique_lock lock{mu_};
    if (used_ + content.size() > capacity_) throw Error{ErrorCode::kStorageFull, "data store capacity exhausted"};
    std::string token;
    do {
        token = rng_.fixed<Hash32>().hex();
    } while (objects_.contains(token));
    used_ += content.size();
    objects_.emplace(token, Object{password_digest(password), std::make_shared<const Bytes>(std::move(content))});
    return token;
}

std::shared_ptr<const Bytes> DataStore::snapshot(std::string_view token, std::string_view password) const {
    std::shared_lock lock{mu_};
    auto it = objects_.find(token);
    if (it == objects_.end()) throw Error{ErrorCode::kNotFound, "no object " + std::string{token}};
    auto given = password_digest(password);
    if (sodium_memcmp(given.bytes.data(), it->second.password_digest.bytes.data(), Hash32::size) != 0) {
        throw Error{ErrorCode::kAccessDenied, "wrong password for object"};
    }
    return it->second.content;
}

Bytes DataStore::retrieve(std::string_view token, std::string_view password) const {
    return *snapshot(token, password);
}

std::unique_ptr<codeexec::ByteSource> DataStore::open(std::string_view token, std::string_view password) const {
    return std::make_unique<SnapshotSource>(snapshot(token, password));
}

void DataStore::tamper(std::string_view token, const Mutation& mutation) {
    if (!simulation_) throw Error{ErrorCode::kAccessDenied, "tampering is only available in simulation mode"};
    std::unique_lock lock{mu_};
    auto it = objects_.find(token);
    if (it == objects_.end()) throw Error{ErrorCode::kNotFound, "no object " + std::string{token}};
    Bytes content = *it->second.content;
    switch (mutation.kind) {
        case Mutation::Kind::kIdentity: break;
        case Mutation::Kind::kFlipByte:
            if (content.empty()) throw Error{ErrorCode::kMalformedData, "cannot flip a byte of an empty object"};
            content[mutation.offset % content.size()] ^= mutation.mask == 0 ? uint8_t{1} : mutation.mask;
            break;
        case Mutation::Kind::kTruncate:
            content.resize(std::min<uint64_t>(mutation.offset, content.size()));
            break;
        case Mutation::Kind::kAppend: content.push_back(mutation.mask); break;
    }
    used_ = used_ - it->second.content->size() + content.size();
    it->second.content = std::make_shared<const Bytes>(std::move(content));
}

uint64_t DataStore::used_bytes() const {
    std::shared_lock lock{mu_};
    return used_;
}

// ---------------------------------------------------------------------------

DataStoreServer::DataStoreServer(const DataStore& store, std::string host)
    : store_{store}, host_{std::move(host)}, server_{std::make_unique<httplib::Server>()} {
    server_->Get(R"(/objects/([0-9a-f]+))", [this](const httplib::Request& req, httplib::Response& res) {
        try {
            auto data = store_.retrieve(req.matches[1].str(), req.get_header_value(kPasswordHeader));
            res.set_content(reinterpret_cast<const char*>(data.data()), data.size(), "application/octet-stream");
        } catch (const Error& e) {
            res.status = e.code() == ErrorCode::kNotFound ? 404 : 403;
            res.set_content(std::string{to_string(e.code())}, "text/plain");
        }
    });
    port_ = server_->bind_to_any_port(host_);
    if (port_ <= 0) throw Error{ErrorCode::kIoFailure, "cannot bind data store server"};
    thread_ = std::thread{[this] { server_->listen_after_bind(); }};
    server_->wait_until_ready();
}

DataStoreServer::~DataStoreServer() {
    server_->stop();
    if (thread_.joinable()) thread_.join();
}

std::string DataStoreServer::url_for(std::string_view token) const {
    return "http://" + host_ + ":" + std::to_string(port_) + "/objects/" + std::string{token};
}

// ---------------------------------------------------------------------------

std::unique_ptr<codeexec::ByteSource> DataFetcher::open(const std::string& url, std::string_view password) const {
    constexpr std::string_view kMem = "mem://";
    constexpr std::string_view kFile = "file://";
    constexpr std::string_view kHttp = "http://";
    std::string_view u{url};

    if (u.starts_with(kMem)) {
        if (!store_) throw Error{ErrorCode::kFetchFailure, "no in-process store attached"};
        return store_->open(u.substr(kMem.size()), password);
    }
    if (u.starts_with(kFile)) {
        return std::make_unique<codeexec::FileSource>(std::string{u.substr(kFile.size())});
    }
    if (u.starts_with(kHttp)) {
        auto rest = u.substr(kHttp.size());
        auto slash = rest.find('/');
        std::string authority{rest.substr(0, slash)};
        std::string path = slash == std::string_view::npos ? "/" : std::string{rest.substr(slash)};
        httplib::Client client{"http://" + authority};
        client.set_connection_timeout(5);
        client.set_read_timeout(60);
        auto res = client.Get(path, httplib::Headers{{kPasswordHeader, std::string{password}}});
        if (!res) throw Error{ErrorCode::kFetchFailure, "cannot reach " + authority};
        if (res->status == 404) throw Error{ErrorCode::kNotFound, "no object at " + url};
        if (res->status == 403) throw Error{ErrorCode::kAccessDenied, "access denied for " + url};
        if (res->status != 200) throw Error{ErrorCode::kFetchFailure, "HTTP " + std::to_string(res->status)};
        return std::make_unique<codeexec::OwnedSource>(to_bytes(res->body));
    }
    throw Error{ErrorCode::kFetchFailure, "unsupported URL scheme: " + url};
}

Bytes DataFetcher::fetch(const std::string& url, std::string_view password) const {
    auto source = open(url, password);
    Bytes out;
    Bytes buf(1 << 16);
    while (std::size_t n = source->read(buf)) out.insert(out.end(), buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(n));
    return out;
}

}  // namespace movsc
