// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "ezchain/core/genesis.hpp"
#include "ezchain/core/transaction.hpp"

namespace ezchain::harness {

/// Brute-force ledger oracle: replays every included batch of every block and
/// tracks the owner of each coin. Knows nothing about VPBs or checkpoints.
///
/// A transaction moves coin c legitimately iff, before the block, c belongs to
/// the sender, was acquired in an earlier block, and no other transaction of
/// the same batch touches c. Legitimate touches move the coin to the
/// recipient; an owner touching a coin twice in one batch destroys it. A batch
/// carrying any bad signature moves nothing.
class Replayer {
public:
    explicit Replayer(const GenesisAllocation& genesis);

    /// Replays one block; batches may come in any order.
    void apply_block(std::uint64_t index, const std::vector<TxnBatch>& batches);

    /// Decision recorded for value `v` of `txn` in block `index`; nullopt if never replayed.
    [[nodiscard]] std::optional<bool> legit(const Transaction& txn, const Value& v, std::uint64_t index) const;

    /// Owner of coin c, nullopt if destroyed.
    [[nodiscard]] std::optional<Address> owner_of(std::uint64_t coin) const;

    [[nodiscard]] std::uint64_t height() const noexcept { return height_; }

private:
    struct Seg {
        std::uint64_t end;
        std::optional<Address> owner;
        std::uint64_t acquired;
    };
    struct Key {
        Bytes txn;
        std::uint64_t begin, end, index;
        friend auto operator<=>(const Key&, const Key&) = default;
    };

    void split_at(std::uint64_t coin);
    std::map<std::uint64_t, Seg> segs_;  // begin -> segment
    std::map<Key, bool> decisions_;
    std::uint64_t height_ = 0;
    std::uint64_t total_ = 0;
};

}  // namespace ezchain::harness
