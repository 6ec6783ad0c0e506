// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string_view>

#include "ezchain/consensus/params.hpp"
#include "ezchain/core/block.hpp"
#include "ezchain/crypto/hash.hpp"

namespace ezchain::consensus {

enum class BlockCheck {
    Valid,
    BadSignature,     // (i) a SigInfo does not verify
    BloomMismatch,    // (ii) rebuilt filter differs from the block's
    MtreeMismatch,    // (iii) root over the SigInfos differs
    DuplicateSender,  // (iv) one sender signed two entries
    BadPreHash,       // (v) header checks
    BadIndex,
    BadTime,
    BadMinerSig,
    BadNonce,
};

std::string_view to_string(BlockCheck c) noexcept;

struct BlockVerdict {
    BlockCheck result = BlockCheck::Valid;
    crypto::OpCounts ops;  // hashes and signature checks spent

    [[nodiscard]] bool valid() const noexcept { return result == BlockCheck::Valid; }
};

/// The five miner-side checks, in order, stopping at the first failure.
/// Never touches transaction bodies: cost depends on the number of senders,
/// not on how many transactions each batch holds.
BlockVerdict validate_block(const Block& block, const SigInfos& siginfos, const Block& parent,
                            const Digest& parent_hash, const ConsensusParams& params);

}  // namespace ezchain::consensus
