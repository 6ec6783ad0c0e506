// SPDX-License-Identifier: Apache-2.0
#include "ezchain/consensus/validation.hpp"

#include <set>

#include "ezchain/crypto/keys.hpp"
#include "ezchain/crypto/merkle.hpp"

namespace ezchain::consensus {

std::string_view to_string(BlockCheck c) noexcept {
    switch (c) {
        case BlockCheck::Valid: return "valid";
        case BlockCheck::BadSignature: return "bad_signature";
        case BlockCheck::BloomMismatch: return "bloom_mismatch";
        case BlockCheck::MtreeMismatch: return "mtree_mismatch";
        case BlockCheck::DuplicateSender: return "duplicate_sender";
        case BlockCheck::BadPreHash: return "bad_pre_hash";
        case BlockCheck::BadIndex: return "bad_index";
        case BlockCheck::BadTime: return "bad_time";
        case BlockCheck::BadMinerSig: return "bad_miner_sig";
        case BlockCheck::BadNonce: return "bad_nonce";
    }
    return "unknown";
}

namespace {

BlockCheck run_checks(const Block& block, const SigInfos& siginfos, const Block& parent,
                      const Digest& parent_hash, const ConsensusParams& params) {
    for (const auto& a : siginfos) {
        if (!crypto::verify(a.sender, a.txns_hash.span(), a.sig)) return BlockCheck::BadSignature;
    }

    if (block.bloom.params() != params.bloom) return BlockCheck::BloomMismatch;
    std::vector<Address> senders;
    senders.reserve(siginfos.size());
    for (const auto& a : siginfos) senders.push_back(a.sender);
    if (crypto::bloom_rebuild(senders, params.bloom) != block.bloom) return BlockCheck::BloomMismatch;

    Digest root = empty_mtree_root();
    if (!siginfos.empty()) {
        std::vector<Digest> leaves;
        leaves.reserve(siginfos.size());
        for (const auto& a : siginfos) leaves.push_back(a.txns_hash);
        root = crypto::merkle_build(std::move(leaves)).root();
    }
    if (root != block.mtree_root) return BlockCheck::MtreeMismatch;

    std::set<Address> seen;
    for (const auto& a : siginfos) {
        if (!seen.insert(a.sender).second) return BlockCheck::DuplicateSender;
    }

    if (block.pre_hash != parent_hash) return BlockCheck::BadPreHash;
    if (block.index != parent.index + 1) return BlockCheck::BadIndex;
    if (block.time < parent.time) return BlockCheck::BadTime;
    if (!crypto::verify(block.miner, block.header_bytes(), block.miner_sig)) return BlockCheck::BadMinerSig;
    if (!nonce_meets_difficulty(block, params.difficulty_bits)) return BlockCheck::BadNonce;
    return BlockCheck::Valid;
}

}  // namespace

BlockVerdict validate_block(const Block& block, const SigInfos& siginfos, const Block& parent,
                            const Digest& parent_hash, const ConsensusParams& params) {
    const auto before = crypto::op_counts();
    BlockVerdict v;
    v.result = run_checks(block, siginfos, parent, parent_hash, params);
    v.ops = crypto::op_counts() - before;
    return v;
}

}  // namespace ezchain::consensus
