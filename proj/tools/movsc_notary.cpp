// Copyright 2026 The movsc Authors
// SPDX-License-Identifier: Apache-2.0

// movsc-notary: notary (or peer) daemon over a chain file.

#include <CLI11.hpp>

#include <atomic>
#include <csignal>
#include <iostream>
#include <thread>

#include "movsc/access_node.hpp"
#include "movsc/datastore.hpp"
#include "movsc/error.hpp"
#include "movsc/ledger.hpp"
#include "movsc/notary.hpp"

using nlohmann::json;
using namespace movsc;

namespace {

std::atomic<bool> g_stop{false};

void on_signal(int) { g_stop = true; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"movsc-notary: validate packages addressed to this identity"};
    app.require_subcommand(1);
    auto* run = app.add_subcommand("run", "poll the chain and process packages");

    std::string identity_path;
    std::string chain_path{"movsc-chain.bin"};
    std::string audit_path;
    std::string dishonest{"honest"};
    long poll_ms = 2000;
    long timeout_s = 300;
    std::size_t workers = 1;
    bool simulation = false;
    bool once = false;
    run->add_option("--identity", identity_path)->required();
    run->add_option("--chain", chain_path)->capture_default_str();
    run->add_option("--poll-ms", poll_ms)->capture_default_str();
    run->add_option("--timeout-s", timeout_s, "per-package execution budget")->capture_default_str();
    run->add_option("--workers", workers)->capture_default_str();
    run->add_option("--audit-log", audit_path, "newline-delimited JSON audit log");
    run->add_option("--dishonest", dishonest, "adversarial mode (simulation only)")
        ->check(CLI::IsMember({"honest", "validate-blind", "invalidate-on-purpose"}));
    run->add_flag("--simulation", simulation, "allow adversarial modes");
    run->add_flag("--once", once, "process pending packages once and exit");

    CLI11_PARSE(app, argc, argv);

    try {
        auto identity = Identity::load(identity_path);
        auto ledger = Ledger::open(chain_path);
        AccessNode node{*ledger};
        DataFetcher fetcher;
        NotaryOptions options;
        options.poll_interval = std::chrono::milliseconds{poll_ms};
        options.execution.timeout = std::chrono::seconds{timeout_s};
        options.mode = *dishonest_mode_from_string(dishonest);
        options.simulation = simulation;
        options.workers = workers;
        if (!audit_path.empty()) options.audit_path = audit_path;
        NotaryDaemon daemon{node, identity, fetcher, options};

        std::signal(SIGINT, on_signal);
        std::signal(SIGTERM, on_signal);
        std::cerr << json{{"event", "started"}, {"address", identity.address().hex()}, {"mode", dishonest}}.dump()
                  << std::endl;
        do {
            ledger->sync();
            for (const auto& o : daemon.run_once()) std::cout << o.to_json().dump() << std::endl;
            if (once) break;
            auto until = std::chrono::steady_clock::now() + options.poll_interval;
            while (!g_stop && std::chrono::steady_clock::now() < until) {
                std::this_thread::sleep_for(std::chrono::milliseconds{20});
            }
        } while (!g_stop);
        return 0;
    } catch (const Error& e) {
        std::cout << json{{"ok", false}, {"error", to_string(e.code())}, {"message", e.what()}}.dump() << std::endl;
        return 1;
    }
}
