// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include "ezchain/consensus/params.hpp"
#include "ezchain/consensus/pool.hpp"
#include "ezchain/core/block.hpp"
#include "ezchain/crypto/keys.hpp"

namespace ezchain::consensus {

struct PackagedBlock {
    Block block;        // Msg1
    SigInfos siginfos;  // Msg2
};

/// Builds the next block over every pool entry: Merkle root over txns hashes in
/// sender order, Bloom filter over the senders, header linked to `parent`.
/// With difficulty_bits > 0 the nonce is searched upward from `nonce_start`.
PackagedBlock package_block(const TxnPool& pool, const Block& parent, const Digest& parent_hash,
                            const crypto::KeyPair& miner, Tick time, std::uint64_t nonce_start,
                            const ConsensusParams& params);

/// Same, over an explicit entry list. Entries are used as given, so a
/// malicious miner (or a test) can produce blocks with duplicate senders.
PackagedBlock package_entries(SigInfos entries, const Block& parent, const Digest& parent_hash,
                              const crypto::KeyPair& miner, Tick time, std::uint64_t nonce_start,
                              const ConsensusParams& params);

/// Recomputes miner_sig after a header field was changed.
void resign_block(Block& b, const crypto::KeyPair& miner);

}  // namespace ezchain::consensus
