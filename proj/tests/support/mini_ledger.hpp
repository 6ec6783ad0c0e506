// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "ezchain/account/wallet.hpp"
#include "ezchain/consensus/chain.hpp"
#include "ezchain/consensus/pool.hpp"

namespace ezchain::testing {

/// Lock-step ledger for tests: one honest miner, instant delivery. Each
/// mine() packages every wallet's pending transactions into one block and
/// lets every wallet process it.
class MiniLedger {
public:
    MiniLedger(std::size_t accounts, std::uint64_t coins_each, consensus::ConsensusParams params,
               std::uint64_t values_each = 1);

    account::Wallet& wallet(std::size_t i) { return *wallets_.at(i); }
    const Address& addr(std::size_t i) const { return wallets_.at(i)->address(); }
    std::size_t index_of(const Address& a) const;
    std::size_t size() const noexcept { return wallets_.size(); }

    consensus::ChainState& chain() { return chain_; }
    const consensus::HeaderChain& headers() const { return chain_.headers(); }
    const GenesisAllocation& genesis() const { return *genesis_; }

    /// Included batches per block height.
    const std::map<std::uint64_t, std::vector<TxnBatchPtr>>& batches() const noexcept { return batches_; }

    /// Packages, mines and processes one block. Returns the transfers the
    /// senders produced; nothing is delivered yet.
    std::vector<account::OutgoingTransfer> mine();

    /// Accepts each transfer at its recipient and returns one result per VPB.
    std::vector<account::VerifyResult> deliver(const std::vector<account::OutgoingTransfer>& transfers);

    /// mine() then deliver(); true when every VPB was accepted.
    bool step();

    /// Mines a block that contains `batch` for `sender` alongside the other
    /// wallets' batches, bypassing the sender's wallet. Used to stage attacks.
    /// Transfers produced by the other wallets are kept in take_pending().
    std::uint64_t mine_with_foreign_batch(std::size_t sender, const TxnBatch& batch);
    std::vector<account::OutgoingTransfer> take_pending() { return std::exchange(pending_deliveries_, {}); }

    const crypto::KeyPair& key(std::size_t i) const { return keys_.at(i); }

    /// Own evidence for a block an attacker needs to assemble a VPB by hand.
    crypto::MtreeProof proof_for(std::uint64_t index, const Address& sender) const {
        return chain_.serve_mtree_proof(index, sender);
    }

private:
    void process_block(std::uint64_t index, std::vector<account::OutgoingTransfer>& out);
    std::vector<account::OutgoingTransfer> mine_pool(const consensus::TxnPool& pool, std::vector<TxnBatchPtr> included);

    std::vector<crypto::KeyPair> keys_;
    std::shared_ptr<const GenesisAllocation> genesis_;
    consensus::ConsensusParams params_;
    consensus::ChainState chain_;
    std::vector<std::unique_ptr<account::Wallet>> wallets_;
    crypto::KeyPair miner_;
    std::map<std::uint64_t, std::vector<TxnBatchPtr>> batches_;
    account::VerifyCache cache_;
    std::vector<account::OutgoingTransfer> pending_deliveries_;
};

}  // namespace ezchain::testing
