// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ezchain/core/error.hpp"
#include "ezchain/harness/acceptance.hpp"
#include "ezchain/harness/analysis.hpp"
#include "ezchain/harness/csv.hpp"
#include "ezchain/harness/presets.hpp"
#include "ezchain/simnet/scenario.hpp"
#include "ezchain/simnet/simulator.hpp"

namespace fs = std::filesystem;
using namespace ezchain;

namespace {

simnet::SimConfig resolve(const std::string& scenario) {
    for (const auto& [name, cfg] : harness::shipped_presets()) {
        if (name == scenario) return cfg;
    }
    return simnet::load_scenario(scenario);
}

// Per-run invariants; returns the failures.
std::vector<std::string> run_checks(const simnet::SimResult& res) {
    std::vector<std::string> fails;
    if (!res.conserved) fails.push_back("value conservation violated");
    if (res.honest_rejections) fails.push_back(std::to_string(res.honest_rejections) + " honest transfers rejected");
    if (res.unreached) fails.push_back(std::to_string(res.unreached) + " gossip deliveries never reached an honest node");
    for (const auto& a : res.log.attacks) {
        if (a.observed != a.expected) {
            fails.push_back("round " + std::to_string(a.round) + " " + a.strategy + ": expected " + a.expected + ", got " +
                            a.observed);
        }
    }
    const auto bound = harness::storage_bound_check(res.log);
    if (!bound.holds()) {
        fails.push_back("storage bound exceeded " + std::to_string(bound.violations) + " times, first in round " +
                        std::to_string(bound.first_violation_round));
    }
    return fails;
}

int do_run(simnet::SimConfig cfg, const fs::path& out, bool check, bool quiet) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto res = simnet::run_simulation(cfg);
    const auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!out.empty()) harness::write_metrics(res.log, out);
    if (!quiet) {
        std::cout << harness::render_report(res.log);
        std::cout << "wall time: " << secs << " s\n";
    }
    if (!check) return 0;
    const auto fails = run_checks(res);
    for (const auto& f : fails) std::cerr << "check failed: " << f << '\n';
    return fails.empty() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"EZchain simulator"};
    app.require_subcommand(1);

    std::string scenario = "storage";
    std::string out;
    std::uint64_t seed = 0;
    std::uint64_t rounds = 0;
    bool check = false;
    bool quiet = false;

    auto* run = app.add_subcommand("run", "Run one scenario and write its metrics");
    run->add_option("-s,--scenario", scenario, "Preset name or scenario JSON file")->capture_default_str();
    run->add_option("--seed", seed, "Override the scenario seed");
    run->add_option("--rounds", rounds, "Override the number of rounds");
    run->add_option("-o,--out", out, "Directory for the CSV files");
    run->add_flag("--check", check, "Exit 1 if a per-run invariant fails");
    run->add_flag("-q,--quiet", quiet, "Do not print the report");

    std::vector<std::size_t> accounts{3, 10, 20};
    auto* sweep = app.add_subcommand("sweep", "Run a scenario over several account counts");
    sweep->add_option("-s,--scenario", scenario, "Preset name or scenario JSON file")->capture_default_str();
    sweep->add_option("--accounts", accounts, "Account node counts")->capture_default_str();
    sweep->add_option("--seed", seed, "Override the scenario seed");
    sweep->add_option("--rounds", rounds, "Override the number of rounds");
    sweep->add_option("-o,--out", out, "Parent directory; one accounts-<n> directory per run")->required();
    sweep->add_flag("--check", check, "Exit 1 if a per-run invariant fails");

    std::string metrics;
    auto* report = app.add_subcommand("report", "Summarize a metrics directory");
    report->add_option("metrics", metrics, "Directory written by run")->required();

    auto* scen = app.add_subcommand("scenarios", "Write the shipped presets as JSON");
    scen->add_option("-o,--out", out, "Target directory")->required();

    harness::AcceptanceOptions acc;
    auto* chk = app.add_subcommand("check", "Run the acceptance suite; exit 1 on any failure");
    chk->add_option("--only", acc.only, "Criterion numbers to run");
    chk->add_option("--adversarial-seeds", acc.adversarial_seeds)->capture_default_str();
    chk->add_option("--oracle-seeds", acc.oracle_seeds)->capture_default_str();
    chk->add_option("-o,--out", out, "Keep the CSVs of the long runs here");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run || *sweep) {
            auto cfg = resolve(scenario);
            if (seed) cfg.seed = seed;
            if (rounds) cfg.rounds = rounds;
            if (*run) return do_run(cfg, out, check, quiet);
            int rc = 0;
            for (auto n : accounts) {
                cfg.account_nodes = n;
                cfg.validate();
                const auto dir = fs::path(out) / ("accounts-" + std::to_string(n));
                std::cout << "== " << n << " accounts -> " << dir.string() << '\n';
                rc |= do_run(cfg, dir, check, false);
            }
            return rc;
        }
        if (*chk) {
            acc.artifacts = out;
            acc.on_result = [](const harness::CriterionResult& r) { std::cout << harness::format_result(r) << std::endl; };
            const auto results = harness::run_acceptance(acc);
            return std::all_of(results.begin(), results.end(), [](const auto& r) { return r.pass; }) ? 0 : 1;
        }
        if (*report) {
            std::cout << harness::render_report(harness::read_metrics(metrics));
            return 0;
        }
        if (*scen) {
            fs::create_directories(out);
            for (const auto& [name, cfg] : harness::shipped_presets()) {
                std::ofstream f(fs::path(out) / (name + ".json"), std::ios::trunc);
                f << simnet::scenario_json(cfg) << '\n';
                if (!f) throw Error(ErrorCode::IoError, name + ".json: write failed");
            }
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
