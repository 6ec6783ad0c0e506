// SPDX-License-Identifier: Apache-2.0
#include "ezchain/simnet/config.hpp"

#include "ezchain/core/error.hpp"

namespace ezchain::simnet {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::ConfigError, what); }

}  // namespace

std::string_view to_string(Backbone b) noexcept { return b == Backbone::Pow ? "pow" : "bft"; }

std::string_view to_string(MinerFault f) noexcept {
    switch (f) {
        case MinerFault::None: return "none";
        case MinerFault::DropMsg1: return "drop_msg1";
        case MinerFault::BadBlock: return "bad_block";
    }
    return "?";
}

std::string_view to_string(AttackStrategy s) noexcept {
    switch (s) {
        case AttackStrategy::SpendThenOmit: return "spend_then_omit";
        case AttackStrategy::Disclose: return "disclose";
        case AttackStrategy::Tamper: return "tamper";
        case AttackStrategy::ForgeSignature: return "forge_signature";
        case AttackStrategy::StaleReplay: return "stale_replay";
    }
    return "?";
}

Backbone parse_backbone(std::string_view s) {
    if (s == "pow") return Backbone::Pow;
    if (s == "bft") return Backbone::Bft;
    bad("unknown backbone '" + std::string(s) + "'");
}

MinerFault parse_miner_fault(std::string_view s) {
    for (auto f : {MinerFault::None, MinerFault::DropMsg1, MinerFault::BadBlock}) {
        if (to_string(f) == s) return f;
    }
    bad("unknown miner fault '" + std::string(s) + "'");
}

AttackStrategy parse_attack(std::string_view s) {
    for (auto a : {AttackStrategy::SpendThenOmit, AttackStrategy::Disclose, AttackStrategy::Tamper,
                   AttackStrategy::ForgeSignature, AttackStrategy::StaleReplay}) {
        if (to_string(a) == s) return a;
    }
    bad("unknown attack strategy '" + std::string(s) + "'");
}

std::size_t SimConfig::byzantine_count() const noexcept {
    return static_cast<std::size_t>(consensus_nodes * byzantine_num / byzantine_den);
}

void SimConfig::validate() const {
    if (consensus_nodes == 0) bad("at least one consensus node is required");
    if (account_nodes < 2) bad("at least two account nodes are required");
    if (max_neighbors < 1) bad("max_neighbors must be >= 1");
    if (bandwidth_bps == 0) bad("bandwidth must be positive");
    if (rounds == 0) bad("rounds must be positive");
    if (block_interval == 0 || mine_offset >= block_interval) bad("mine_offset must fall inside the block interval");
    if (byzantine_den == 0) bad("byzantine fraction denominator is zero");
    const bool lambda_ok = backbone == Backbone::Pow ? 2 * byzantine_num < byzantine_den
                                                     : 3 * byzantine_num < byzantine_den;
    if (!lambda_ok) bad("byzantine fraction exceeds the backbone bound");
    if (byzantine_count() >= consensus_nodes) bad("no honest consensus node left");
    if (consensus.bloom.bits == 0 || consensus.bloom.hashes == 0) bad("bloom parameters must be positive");
    if (values_per_account == 0 || coins_per_account < values_per_account) bad("each value needs at least one coin");
    if (txns.active_probability < 0.0 || txns.active_probability > 1.0) bad("active_probability outside [0, 1]");
    if (txns.max_per_account == 0 || txns.max_amount == 0) bad("transaction model limits must be positive");
    for (const auto& a : attacks) {
        if (a.account >= account_nodes) bad("attack account index out of range");
        if (a.start_round == 0 || a.count == 0) bad("attack start_round and count must be positive");
    }
}

}  // namespace ezchain::simnet
