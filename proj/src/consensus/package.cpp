// SPDX-License-Identifier: Apache-2.0
#include "ezchain/consensus/package.hpp"

#include <algorithm>

#include "ezchain/crypto/merkle.hpp"

namespace ezchain::consensus {

void resign_block(Block& b, const crypto::KeyPair& miner) {
    b.miner = miner.address();
    b.miner_sig = miner.sign(b.header_bytes());
}

PackagedBlock package_entries(SigInfos entries, const Block& parent, const Digest& parent_hash,
                              const crypto::KeyPair& miner, Tick time, std::uint64_t nonce_start,
                              const ConsensusParams& params) {
    PackagedBlock out;
    Block& b = out.block;
    std::vector<Address> senders;
    senders.reserve(entries.size());
    for (const auto& a : entries) senders.push_back(a.sender);
    b.bloom = crypto::bloom_rebuild(senders, params.bloom);
    if (entries.empty()) {
        b.mtree_root = empty_mtree_root();
    } else {
        std::vector<Digest> leaves;
        leaves.reserve(entries.size());
        for (const auto& a : entries) leaves.push_back(a.txns_hash);
        b.mtree_root = crypto::merkle_build(std::move(leaves)).root();
    }
    b.pre_hash = parent_hash;
    b.time = std::max(time, parent.time);
    b.miner = miner.address();
    b.index = parent.index + 1;
    b.nonce = nonce_start;
    while (!nonce_meets_difficulty(b, params.difficulty_bits)) ++b.nonce;
    resign_block(b, miner);
    out.siginfos = std::move(entries);
    return out;
}

PackagedBlock package_block(const TxnPool& pool, const Block& parent, const Digest& parent_hash,
                            const crypto::KeyPair& miner, Tick time, std::uint64_t nonce_start,
                            const ConsensusParams& params) {
    return package_entries(pool.entries(), parent, parent_hash, miner, time, nonce_start, params);
}

}  // namespace ezchain::consensus
