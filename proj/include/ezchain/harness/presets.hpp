// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ezchain/simnet/config.hpp"

namespace ezchain::harness {

/// 3 consensus + 3 account nodes, 1200 rounds of stationary whole-value
/// payments. Storage, CK_gap and bound measurements.
simnet::SimConfig storage_preset();

/// 3 consensus + 20 account nodes under the default latencies and bandwidth,
/// 2.5 s blocks so a relayed block clears the links before the next submissions.
simnet::SimConfig delay_preset();

/// 4 consensus + 80 account nodes injecting more transactions per round than
/// a 1 Mbps chain could carry.
simnet::SimConfig throughput_preset();

/// Small network with one spend-then-omit attack by account 0.
simnet::SimConfig adversarial_preset(std::uint64_t seed);

/// At most 6 accounts and 60 blocks, a mix of attacks, batches recorded for
/// the replayer; every third seed uses a crowded Bloom filter.
simnet::SimConfig oracle_preset(std::uint64_t seed);

/// The presets shipped as scenarios/<name>.json.
std::vector<std::pair<std::string, simnet::SimConfig>> shipped_presets();

}  // namespace ezchain::harness
