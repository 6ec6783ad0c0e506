// SPDX-License-Identifier: Apache-2.0
#include "ezchain/harness/presets.hpp"

namespace ezchain::harness {

using simnet::AttackSpec;
using simnet::AttackStrategy;
using simnet::SimConfig;

SimConfig storage_preset() {
    SimConfig c;
    c.name = "storage";
    c.seed = 1;
    c.rounds = 1200;
    c.consensus_nodes = 3;
    c.account_nodes = 3;
    c.coins_per_account = 1000;
    c.values_per_account = 8;
    c.txns.active_probability = 0.5;
    c.txns.max_per_account = 2;
    c.txns.whole_values = true;
    return c;
}

SimConfig delay_preset() {
    SimConfig c;
    c.name = "delay";
    c.seed = 1;
    c.rounds = 1200;
    c.block_interval = 2500;
    c.consensus_nodes = 3;
    c.account_nodes = 20;
    c.values_per_account = 8;
    c.txns.active_probability = 0.5;
    c.txns.max_per_account = 2;
    c.txns.whole_values = true;
    return c;
}

SimConfig throughput_preset() {
    SimConfig c;
    c.name = "throughput";
    c.seed = 1;
    c.rounds = 20;
    c.consensus_nodes = 4;
    c.account_nodes = 80;
    c.coins_per_account = 3500;
    c.values_per_account = 350;
    c.txns.active_probability = 1.0;
    c.txns.max_per_account = 108;
    c.txns.whole_values = true;
    c.drain_ticks = 30'000;
    return c;
}

SimConfig adversarial_preset(std::uint64_t seed) {
    SimConfig c;
    c.name = "adversarial";
    c.seed = seed;
    c.rounds = 14;
    c.consensus_nodes = 3;
    c.account_nodes = 4;
    c.values_per_account = 4;
    c.consensus.bloom = crypto::BloomParams{1u << 14, 7};
    c.txns.max_per_account = 2;
    c.drain_ticks = 20'000;
    c.attacks.push_back(AttackSpec{0, AttackStrategy::SpendThenOmit, 2 + seed % 5, 0, 1});
    return c;
}

SimConfig oracle_preset(std::uint64_t seed) {
    static constexpr AttackStrategy kCycle[] = {AttackStrategy::SpendThenOmit, AttackStrategy::Disclose,
                                                AttackStrategy::Tamper, AttackStrategy::ForgeSignature,
                                                AttackStrategy::StaleReplay};
    SimConfig c;
    c.name = "oracle";
    c.seed = seed;
    c.rounds = 60;
    c.consensus_nodes = 3;
    c.account_nodes = 3 + seed % 4;
    c.values_per_account = 3;
    c.coins_per_account = 60;
    c.consensus.bloom = seed % 3 == 0 ? crypto::BloomParams{64, 1} : crypto::BloomParams{1u << 12, 5};
    c.txns.max_per_account = 3;
    c.txns.max_amount = 25;
    c.txns.selection = static_cast<account::SelectionStrategy>(seed % 3);
    c.record_batches = true;
    c.drain_ticks = 20'000;
    const auto s = kCycle[seed % 5];
    c.attacks.push_back(AttackSpec{seed % c.account_nodes, s, 3 + seed % 7, 11, s == AttackStrategy::ForgeSignature ? 1u : 3u});
    return c;
}

std::vector<std::pair<std::string, SimConfig>> shipped_presets() {
    return {
        {"storage", storage_preset()},
        {"delay", delay_preset()},
        {"throughput", throughput_preset()},
        {"adversarial", adversarial_preset(1)},
        {"oracle", oracle_preset(1)},
    };
}

}  // namespace ezchain::harness
