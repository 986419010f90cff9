// Copyright 2026 The movsc Authors
// SPDX-License-Identifier: Apache-2.0

// movsc-sim: runs scenario scripts and reports predicate results.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "movsc/error.hpp"
#include "movsc/harness.hpp"

namespace {

void write_file(const std::string& path, std::string_view content) {
    std::ofstream out{path, std::ios::binary | std::ios::trunc};
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw movsc::Error{movsc::ErrorCode::kIoFailure, "cannot write " + path};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"movsc scenario runner"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "run one scenario, or the builtin suite with --suite");
    std::vector<std::string> paths;
    std::optional<uint64_t> seed;
    std::string trace_path;
    std::string chain_path;
    bool http = false;
    bool suite = false;
    bool verbose = false;
    run->add_option("scenario", paths, "scenario JSON files");
    run->add_option("--seed", seed, "override the scenario seed");
    run->add_option("--export-trace", trace_path, "write the full report (with trace) as JSON");
    run->add_option("--export-chain", chain_path, "write the final chain file");
    run->add_flag("--http", http, "serve data over loopback HTTP");
    run->add_flag("--suite", suite, "run every scenario in the builtin suite");
    run->add_flag("-v,--verbose", verbose, "print every predicate");

    auto* list = app.add_subcommand("list", "list the builtin suite");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*list) {
            for (const auto& p : movsc::builtin_scenarios()) std::cout << p.string() << '\n';
            return 0;
        }
        if (suite) {
            for (const auto& p : movsc::builtin_scenarios()) paths.push_back(p.string());
        }
        if (paths.empty()) {
            std::cerr << "no scenario given\n";
            return 2;
        }
        if (paths.size() > 1 && (!trace_path.empty() || !chain_path.empty())) {
            std::cerr << "--export-trace and --export-chain take a single scenario\n";
            return 2;
        }

        bool all_passed = true;
        for (const auto& path : paths) {
            auto scenario = movsc::Scenario::load(path);
            auto report = movsc::run_scenario(scenario, {seed, http});
            all_passed = all_passed && report.passed();

            std::size_t ok = 0;
            for (const auto& p : report.predicates) ok += p.passed ? 1 : 0;
            std::cout << (report.passed() ? "PASS " : "FAIL ") << report.name << " (" << ok << "/"
                      << report.predicates.size() << " predicates)\n";
            if (report.panic) std::cout << "  panic: " << *report.panic << '\n';
            for (const auto& p : report.predicates) {
                if (verbose || !p.passed) {
                    std::cout << "  " << (p.passed ? "ok   " : "FAIL ") << p.name;
                    if (!p.detail.empty()) std::cout << "  [" << p.detail << "]";
                    std::cout << '\n';
                }
            }
            if (!trace_path.empty()) write_file(trace_path, report.to_json().dump(2));
            if (!chain_path.empty()) {
                write_file(chain_path,
                           std::string_view{reinterpret_cast<const char*>(report.chain.data()), report.chain.size()});
            }
        }
        return all_passed ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
