// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ezchain/account/selection.hpp"
#include "ezchain/consensus/params.hpp"
#include "ezchain/core/bytes.hpp"

namespace ezchain::simnet {

enum class Backbone { Pow, Bft };

/// Scripted misbehavior of a byzantine consensus node when it wins a round.
enum class MinerFault { None, DropMsg1, BadBlock };

/// Scripted double-spend attempts by an account. Each attack spends a value
/// honestly to X, then tries to pass the same value to Y.
enum class AttackStrategy {
    SpendThenOmit,   // re-spend, VPB omits the first spend block
    Disclose,        // re-spend, VPB shows both spends
    Tamper,          // rewrite the first spend's recipient inside its batch
    ForgeSignature,  // re-spend signed with the wrong key
    StaleReplay,     // resend X's VPB to X after X already took the value
};

std::string_view to_string(Backbone b) noexcept;
std::string_view to_string(MinerFault f) noexcept;
std::string_view to_string(AttackStrategy s) noexcept;
Backbone parse_backbone(std::string_view s);
MinerFault parse_miner_fault(std::string_view s);
AttackStrategy parse_attack(std::string_view s);

struct AttackSpec {
    std::size_t account = 0;
    AttackStrategy strategy = AttackStrategy::SpendThenOmit;
    std::uint64_t start_round = 1;
    std::uint64_t every = 0;  // 0: once
    std::uint64_t count = 1;
};

/// Per-round random payments of honest accounts.
struct TxnModel {
    double active_probability = 0.5;
    std::uint32_t max_per_account = 1;
    std::uint64_t max_amount = 10;
    bool whole_values = false;  // pay one whole held value, never split
    account::SelectionStrategy selection = account::SelectionStrategy::Naive;
};

/// One tick is one millisecond of simulated time.
struct SimConfig {
    std::string name = "default";
    std::uint64_t seed = 1;
    std::uint64_t rounds = 100;

    std::size_t consensus_nodes = 3;
    std::size_t account_nodes = 3;
    std::size_t max_neighbors = 30;
    std::uint64_t bandwidth_bps = 1'000'000;
    Tick latency_cc_max = 1000;  // uniform [0, max] per message
    Tick latency_ca = 1500;
    Tick latency_aa = 1500;

    Tick block_interval = 2000;
    Tick mine_offset = 1600;
    consensus::ConsensusParams consensus{crypto::BloomParams{1u << 19, 7}, 0, 100};
    Backbone backbone = Backbone::Pow;
    std::uint64_t byzantine_num = 0;
    std::uint64_t byzantine_den = 1;
    MinerFault miner_fault = MinerFault::None;

    std::uint64_t coins_per_account = 1000;
    std::uint64_t values_per_account = 1;
    std::uint64_t pool_expiry = 2;  // blocks past the next one a submission may wait

    TxnModel txns;
    std::vector<AttackSpec> attacks;

    Tick drain_ticks = 60'000;  // quiet time after the last round
    bool record_batches = false;

    [[nodiscard]] std::size_t node_count() const noexcept { return consensus_nodes + account_nodes; }
    /// floor(lambda * consensus_nodes)
    [[nodiscard]] std::size_t byzantine_count() const noexcept;
    /// Throws ConfigError describing the first violated constraint.
    void validate() const;
};

}  // namespace ezchain::simnet
