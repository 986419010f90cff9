// Copyright 2026 The movsc Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>

#include "movsc/access_node.hpp"
#include "movsc/codeexec.hpp"
#include "movsc/crypto.hpp"
#include "movsc/datastore.hpp"
#include "movsc/ledger.hpp"

namespace movsc::test {

//! Ledger, access node and data store wired together with a mock clock and
//! a seeded rng, plus an admin identity that registered the builtin code.
struct World {
    explicit World(uint64_t seed = 1)
        : rng{seed}, clock{std::make_shared<MockClock>()}, ledger{clock}, node{ledger}, store{rng}, fetcher{&store} {
        admin = make(Role::kClient);
        ContractSession session{node, admin};
        register_builtin_code(session);
    }

    Identity make(Role role, bool registered = true) {
        auto id = Identity::generate(role, rng);
        if (registered) node.register_identity(id);
        return id;
    }

    Identity make_notary() {
        auto id = make(Role::kNotary);
        ContractSession{node, id}.register_notary();
        return id;
    }

    crypto::SeededRng rng;
    std::shared_ptr<MockClock> clock;
    Ledger ledger;
    AccessNode node;
    DataStore store;
    DataFetcher fetcher;
    Identity admin;
};

}  // namespace movsc::test
