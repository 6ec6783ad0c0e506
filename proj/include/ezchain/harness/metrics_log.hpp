// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ezchain/core/bytes.hpp"

namespace ezchain::harness {

/// State at the end of round `round` (tick round * block_interval).
struct RoundRecord {
    std::uint64_t round = 0;
    std::uint64_t block_index = 0;  // 0: no valid block this round
    std::uint64_t created = 0;      // honest transactions created this round
    std::uint64_t txn_count = 0;    // transactions inside the included batches
    std::uint64_t acctxn_count = 0;
    std::uint64_t block_size_bytes = 0;
    std::uint64_t validate_hashes = 0;
    std::uint64_t validate_sig_verifies = 0;
    std::uint64_t consensus_storage_bytes = 0;
    std::uint64_t confirmed = 0;  // transactions whose last VPB was accepted this round
    std::uint64_t holdings_total = 0;
    std::uint64_t in_flight = 0;
    std::uint64_t forfeited = 0;
    std::uint64_t total_coins = 0;
    friend bool operator==(const RoundRecord&, const RoundRecord&) = default;
};

/// One wallet at the end of one round.
struct StorageRecord {
    std::uint64_t round = 0;
    std::uint64_t account = 0;
    std::uint64_t vpb_bytes = 0;
    std::uint64_t proof_unit_bytes = 0;
    std::uint64_t checkpoint_bytes = 0;
    std::uint64_t values_held = 0;
    std::uint64_t proof_units = 0;
    std::uint64_t max_holders = 0;
    std::uint64_t max_span = 0;        // longest owner segment in blocks
    std::uint64_t max_unit_bytes = 0;  // largest proof unit plus its block index
    std::uint64_t active_blocks = 0;   // processed blocks whose filter reports the wallet
    std::uint64_t processed_height = 0;
    friend bool operator==(const StorageRecord&, const StorageRecord&) = default;
};

/// One VPB delivery judged by its recipient.
struct TransferRecord {
    std::uint64_t round = 0;  // round of the decision
    std::uint64_t txn_block = 0;
    std::uint64_t sender = 0;
    std::uint64_t recipient = 0;
    std::uint64_t amount = 0;
    std::uint64_t proof_units = 0;
    std::uint64_t holders = 0;  // proof chain length after the checkpoint cut
    std::uint64_t vpb_bytes = 0;
    std::uint64_t blocks_scanned = 0;
    std::string reason;
    bool adversarial = false;
    Tick create_tick = 0;
    Tick accept_tick = 0;
    friend bool operator==(const TransferRecord&, const TransferRecord&) = default;
};

/// An honest transaction whose every value was accepted.
struct DelayRecord {
    std::uint64_t create_round = 0;
    std::uint64_t sender = 0;
    std::uint64_t recipient = 0;
    std::uint64_t txn_block = 0;
    Tick create_tick = 0;
    Tick confirm_tick = 0;
    [[nodiscard]] Tick delay() const noexcept { return confirm_tick - create_tick; }
    friend bool operator==(const DelayRecord&, const DelayRecord&) = default;
};

struct AttackRecord {
    std::uint64_t round = 0;
    std::uint64_t attacker = 0;
    std::uint64_t victim = 0;
    std::string strategy;
    std::string expected;
    std::string observed;  // a verify reason, or "abandoned"
    friend bool operator==(const AttackRecord&, const AttackRecord&) = default;
};

/// Host-dependent; kept apart from the deterministic records.
struct WallclockRecord {
    std::uint64_t block_index = 0;
    std::uint64_t node = 0;
    std::uint64_t txn_count = 0;
    std::uint64_t nanos = 0;

    friend bool operator==(const WallclockRecord&, const WallclockRecord&) = default;
};

struct MetricsLog {
    /// Ordered key/value pairs: run parameters and summary counters.
    std::vector<std::pair<std::string, std::string>> meta;
    std::vector<RoundRecord> rounds;
    std::vector<StorageRecord> storage;
    std::vector<TransferRecord> transfers;
    std::vector<DelayRecord> delays;
    std::vector<AttackRecord> attacks;
    std::vector<WallclockRecord> wallclock;

    void set_meta(const std::string& key, std::string value);
    [[nodiscard]] const std::string* find_meta(const std::string& key) const;
    /// Throws ConfigError when `key` is missing or not an unsigned integer.
    [[nodiscard]] std::uint64_t meta_u64(const std::string& key) const;
    [[nodiscard]] double meta_double(const std::string& key) const;
};

}  // namespace ezchain::harness
