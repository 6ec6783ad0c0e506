// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "ezchain/simnet/config.hpp"

namespace ezchain::simnet {

/// JSON scenario format. Every section and key is optional; missing keys keep
/// the SimConfig defaults, unknown keys are rejected.
///
///   {
///     "name": "desk", "seed": 7, "rounds": 300,
///     "network": {"consensus_nodes": 3, "account_nodes": 10, "max_neighbors": 30,
///                 "bandwidth_bps": 1000000, "latency_cc_max_ms": 1000,
///                 "latency_ca_ms": 1500, "latency_aa_ms": 1500},
///     "consensus": {"block_interval_ms": 2000, "mine_offset_ms": 1600,
///                   "bloom_bits": 524288, "bloom_hashes": 7, "retention_window": 100,
///                   "difficulty_bits": 0, "backbone": "pow",
///                   "byzantine_fraction": [1, 3], "miner_fault": "none"},
///     "accounts": {"coins": 1000, "values": 1, "pool_expiry": 2},
///     "transactions": {"active_probability": 0.5, "max_per_account": 1,
///                      "max_amount": 10, "whole_values": false, "selection": "naive"},
///     "attacks": [{"account": 2, "strategy": "spend_then_omit",
///                  "start_round": 5, "every": 10, "count": 3}],
///     "run": {"drain_ms": 60000, "record_batches": false}
///   }
///
/// Throws ScenarioError with the offending key path; the result is validated.
SimConfig parse_scenario(std::string_view json_text);
SimConfig load_scenario(const std::filesystem::path& path);

/// Canonical JSON of a config (round-trips through parse_scenario).
std::string scenario_json(const SimConfig& cfg);

}  // namespace ezchain::simnet
