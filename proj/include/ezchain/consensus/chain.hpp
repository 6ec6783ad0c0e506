// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <vector>

#include "ezchain/consensus/challenge.hpp"
#include "ezchain/consensus/params.hpp"
#include "ezchain/core/block.hpp"
#include "ezchain/core/genesis.hpp"
#include "ezchain/crypto/merkle.hpp"

namespace ezchain::consensus {

using BlockPtr = std::shared_ptr<const Block>;

/// Genesis block plus the Merkle leaves it commits to (one leaf per owner,
/// ascending address, leaf = hash(owner | values)).
struct GenesisBlock {
    BlockPtr block;
    std::vector<Address> owners;
    crypto::MerkleTree tree;
};

GenesisBlock make_genesis_block(const GenesisAllocation& genesis, const crypto::BloomParams& bloom);

/// Hash-linked list of blocks. This is all an account keeps of the chain.
class HeaderChain {
public:
    HeaderChain(std::shared_ptr<const GenesisAllocation> genesis, const crypto::BloomParams& bloom);

    /// Throws ChainMismatch unless `b` extends the tip (index and pre_hash).
    void append(BlockPtr b);
    /// Same, with the hash already computed by the caller.
    void append(BlockPtr b, const Digest& hash);

    [[nodiscard]] std::uint64_t height() const noexcept { return blocks_.size() - 1; }
    [[nodiscard]] const Block& at(std::uint64_t index) const { return *blocks_.at(index); }
    [[nodiscard]] const BlockPtr& ptr(std::uint64_t index) const { return blocks_.at(index); }
    [[nodiscard]] const Digest& hash_at(std::uint64_t index) const { return hashes_.at(index); }
    [[nodiscard]] const Block& tip() const { return *blocks_.back(); }
    [[nodiscard]] const GenesisAllocation& genesis() const noexcept { return *genesis_; }
    [[nodiscard]] const std::shared_ptr<const GenesisAllocation>& genesis_ptr() const noexcept { return genesis_; }

    /// Sum of canonical block sizes.
    [[nodiscard]] std::uint64_t storage_bytes() const noexcept { return bytes_; }

private:
    std::shared_ptr<const GenesisAllocation> genesis_;
    std::vector<BlockPtr> blocks_;
    std::vector<Digest> hashes_;
    std::uint64_t bytes_ = 0;
};

/// Consensus-node view: header chain plus, for the genesis block and the most
/// recent `retention_window` blocks, the SigInfos and full Merkle tree needed
/// to serve proofs and answer challenges.
class ChainState {
public:
    ChainState(std::shared_ptr<const GenesisAllocation> genesis, ConsensusParams params);

    /// Appends an already validated block; throws ChainMismatch if it does not extend the tip.
    void append(BlockPtr block, SigInfos siginfos);
    void append(BlockPtr block, const Digest& hash, SigInfos siginfos);

    [[nodiscard]] const HeaderChain& headers() const noexcept { return headers_; }
    [[nodiscard]] std::uint64_t height() const noexcept { return headers_.height(); }
    [[nodiscard]] const ConsensusParams& params() const noexcept { return params_; }

    /// Throws BlockPruned (not retained) or UnknownSender (no leaf for `sender`,
    /// e.g. a Bloom false positive).
    [[nodiscard]] crypto::MtreeProof serve_mtree_proof(std::uint64_t block_index, const Address& sender) const;

    /// Throws BlockPruned when the block left the retention window.
    [[nodiscard]] ChallengeResponse respond_challenge(const Challenge& c) const;

    [[nodiscard]] bool retained(std::uint64_t block_index) const { return retained_.count(block_index) != 0; }

    /// Blocks plus retained SigInfos and tree nodes, in canonical bytes.
    [[nodiscard]] std::uint64_t storage_bytes() const noexcept;

private:
    struct Retained {
        SigInfos siginfos;  // for genesis: owners with empty hashes/signatures
        std::vector<Address> senders;
        crypto::MerkleTree tree;
        std::uint64_t bytes;
    };

    HeaderChain headers_;
    ConsensusParams params_;
    std::map<std::uint64_t, Retained> retained_;
    std::uint64_t retained_bytes_ = 0;
};

}  // namespace ezchain::consensus
