// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <vector>

#include "ezchain/account/verify.hpp"
#include "ezchain/core/genesis.hpp"
#include "ezchain/core/transaction.hpp"
#include "ezchain/harness/metrics_log.hpp"
#include "ezchain/simnet/config.hpp"

namespace ezchain::simnet {

/// One recipient's verdict on one transferred value.
struct TransferDecision {
    Transaction txn;
    Value value{0, 0};
    std::uint64_t txn_block = 0;
    std::size_t recipient = 0;
    account::VerifyReason reason = account::VerifyReason::Accept;
    bool adversarial = false;
    bool first_delivery = true;  // false for a repeat of an earlier (txn, value, block)
};

struct SimResult {
    harness::MetricsLog log;
    std::shared_ptr<const GenesisAllocation> genesis;
    std::vector<TransferDecision> decisions;
    /// Batches of every valid block, by height; filled when record_batches is set.
    std::map<std::uint64_t, std::vector<TxnBatch>> batches;
    std::uint64_t height = 0;  // valid blocks produced
    bool conserved = true;     // the coin audit held at every round
    std::uint64_t honest_rejections = 0;
    /// Honest node / honest gossip pairs that never met.
    std::uint64_t unreached = 0;
    /// Largest per-node minimum hop count over all honest gossip.
    std::uint64_t max_gossip_hops = 0;
    /// Diameter of the honest subgraph.
    std::uint64_t honest_diameter = 0;
    /// Honest nodes whose chain ends below `height`.
    std::uint64_t lagging_nodes = 0;
};

/// Node ids: consensus nodes 0..c-1, then accounts c..c+a-1. Account indices
/// in the metrics count from 0 among accounts. Throws ConfigError,
/// InfeasibleTopology, or ScenarioError (with the round) for a bad script.
SimResult run_simulation(const SimConfig& cfg);

}  // namespace ezchain::simnet
