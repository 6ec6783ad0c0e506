// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "ezchain/core/transaction.hpp"
#include "ezchain/crypto/bloom.hpp"

namespace ezchain::consensus {

struct ConsensusParams {
    crypto::BloomParams bloom{};
    std::uint32_t difficulty_bits = 0;
    /// Blocks whose SigInfos and Merkle tree stay available for proofs and challenges.
    std::uint64_t retention_window = 100;
};

/// Msg2: one (sender, HASH(Txns), SigInfo) entry per Merkle leaf, in leaf order.
using SigInfos = std::vector<AccTxn>;

/// Root committed by a block with no submissions.
Digest empty_mtree_root();

}  // namespace ezchain::consensus

namespace ezchain {

/// count u32 | AccTxn entries.
void encode(Encoder& enc, const std::vector<AccTxn>& siginfos);

}  // namespace ezchain
