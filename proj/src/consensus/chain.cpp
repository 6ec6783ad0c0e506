// SPDX-License-Identifier: Apache-2.0
#include "ezchain/consensus/chain.hpp"

#include <algorithm>

#include "ezchain/core/error.hpp"
#include "ezchain/crypto/hash.hpp"

namespace ezchain::consensus {

GenesisBlock make_genesis_block(const GenesisAllocation& genesis, const crypto::BloomParams& bloom) {
    auto owners = genesis.owners();
    std::vector<Digest> leaves;
    leaves.reserve(owners.size());
    for (const auto& o : owners) leaves.push_back(crypto::hash(genesis_leaf_bytes(o, genesis.values_of(o))));
    auto tree = crypto::MerkleTree::build(std::move(leaves));
    auto b = std::make_shared<Block>();
    b->mtree_root = tree.root();
    b->bloom = crypto::bloom_rebuild(owners, bloom);
    b->index = 0;
    return GenesisBlock{std::move(b), std::move(owners), std::move(tree)};
}

HeaderChain::HeaderChain(std::shared_ptr<const GenesisAllocation> genesis, const crypto::BloomParams& bloom)
    : genesis_(std::move(genesis)) {
    auto g = make_genesis_block(*genesis_, bloom);
    hashes_.push_back(block_hash(*g.block));
    bytes_ += encoded_size(*g.block);
    blocks_.push_back(std::move(g.block));
}

void HeaderChain::append(BlockPtr b) {
    auto h = block_hash(*b);
    append(std::move(b), h);
}

void HeaderChain::append(BlockPtr b, const Digest& hash) {
    if (b->index != height() + 1 || b->pre_hash != hashes_.back()) {
        throw Error(ErrorCode::ChainMismatch, "block " + std::to_string(b->index) + " does not extend tip " +
                                                  std::to_string(height()));
    }
    bytes_ += encoded_size(*b);
    hashes_.push_back(hash);
    blocks_.push_back(std::move(b));
}

namespace {

std::uint64_t tree_bytes(const crypto::MerkleTree& t) { return t.node_count() * 32; }

}  // namespace

ChainState::ChainState(std::shared_ptr<const GenesisAllocation> genesis, ConsensusParams params)
    : headers_(genesis, params.bloom), params_(params) {
    auto g = make_genesis_block(*genesis, params.bloom);
    Retained r{{}, g.owners, std::move(g.tree), 0};
    for (std::size_t i = 0; i < r.senders.size(); ++i) r.siginfos.push_back(AccTxn{r.senders[i], r.tree.leaves()[i], {}});
    r.bytes = encoded_size(r.siginfos) + tree_bytes(r.tree);
    retained_bytes_ += r.bytes;
    retained_.emplace(0, std::move(r));
}

void ChainState::append(BlockPtr block, SigInfos siginfos) {
    auto h = block_hash(*block);
    append(std::move(block), h, std::move(siginfos));
}

void ChainState::append(BlockPtr block, const Digest& hash, SigInfos siginfos) {
    const auto index = block->index;
    headers_.append(std::move(block), hash);

    std::vector<Digest> leaves;
    std::vector<Address> senders;
    leaves.reserve(siginfos.size());
    for (const auto& a : siginfos) {
        leaves.push_back(a.txns_hash);
        senders.push_back(a.sender);
    }
    if (leaves.empty()) leaves.push_back(empty_mtree_root());
    Retained r{std::move(siginfos), std::move(senders), crypto::MerkleTree::build(std::move(leaves)), 0};
    r.bytes = encoded_size(r.siginfos) + tree_bytes(r.tree);
    retained_bytes_ += r.bytes;
    retained_.emplace(index, std::move(r));

    while (retained_.size() > 1) {
        auto oldest = std::next(retained_.begin());
        if (oldest->first + params_.retention_window > index) break;
        retained_bytes_ -= oldest->second.bytes;
        retained_.erase(oldest);
    }
}

crypto::MtreeProof ChainState::serve_mtree_proof(std::uint64_t block_index, const Address& sender) const {
    auto it = retained_.find(block_index);
    if (it == retained_.end()) throw Error(ErrorCode::BlockPruned, "block " + std::to_string(block_index) + " not retained");
    const auto& r = it->second;
    auto pos = std::find(r.senders.begin(), r.senders.end(), sender);
    if (pos == r.senders.end()) {
        throw Error(ErrorCode::UnknownSender, "no leaf for sender in block " + std::to_string(block_index));
    }
    return r.tree.prove(static_cast<std::size_t>(pos - r.senders.begin()));
}

ChallengeResponse ChainState::respond_challenge(const Challenge& c) const {
    auto it = retained_.find(c.block_index);
    if (it == retained_.end()) throw Error(ErrorCode::BlockPruned, "block " + std::to_string(c.block_index) + " not retained");
    ChallengeResponse r;
    r.block_index = c.block_index;
    r.kind = c.kind;
    if (c.kind == ChallengeKind::Bloom) {
        r.elements = it->second.senders;
    } else {
        r.siginfos = it->second.siginfos;
    }
    return r;
}

std::uint64_t ChainState::storage_bytes() const noexcept { return headers_.storage_bytes() + retained_bytes_; }

}  // namespace ezchain::consensus
