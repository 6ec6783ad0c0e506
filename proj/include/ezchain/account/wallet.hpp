// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <variant>
#include <vector>

#include "ezchain/account/checkpoint.hpp"
#include "ezchain/account/selection.hpp"
#include "ezchain/account/verify.hpp"
#include "ezchain/account/vpb.hpp"
#include "ezchain/consensus/chain.hpp"
#include "ezchain/crypto/keys.hpp"

namespace ezchain::account {

struct Holding {
    VpbPair vpb;
    std::uint64_t acquired_height = 0;  // block that delivered the value (0 for genesis)
    bool locked = false;                // spent by a transaction awaiting inclusion
};

/// Everything the sender hands one recipient for one included transaction.
struct OutgoingTransfer {
    Address recipient;
    Transaction txn;
    std::uint64_t txn_block = 0;
    std::vector<VpbPair> vpbs;
};

struct Submission {
    AccTxn acctxn;
    TxnBatchPtr batch;
};

/// What processing the next block requires from the network.
enum class BlockNeed { Nothing, MtreeProof, BloomProof };

/// Account-side state: held values with their VPBs, checkpoints, pending and
/// submitted transactions, and the per-block evidence the wallet produced.
///
/// Blocks are processed strictly in height order through exactly one of
/// apply_inclusion / apply_false_positive / apply_absent per block.
class Wallet {
public:
    Wallet(crypto::KeyPair key, const GenesisAllocation& genesis);

    [[nodiscard]] const Address& address() const noexcept { return key_.address(); }
    [[nodiscard]] const std::vector<Holding>& holdings() const noexcept { return holdings_; }
    [[nodiscard]] const CheckpointStore& checkpoints() const noexcept { return checkpoints_; }
    [[nodiscard]] std::uint64_t processed_height() const noexcept { return processed_; }

    /// Sum of held amounts, locked values included.
    [[nodiscard]] std::uint64_t balance() const noexcept;
    /// Unlocked amount this wallet could send to `recipient` right now.
    [[nodiscard]] std::uint64_t spendable_to(const Address& recipient) const;

    /// Selects values for `amount`, splitting if the strategy requires, and
    /// creates the transaction. Throws InsufficientFunds or SelfTransfer.
    Transaction pay(const Address& recipient, std::uint64_t amount, SelectionStrategy strategy, Tick time);

    /// Each value must equal an unlocked holding transferable to `recipient`;
    /// otherwise ValueNotHeld. The values stay locked until inclusion or expiry.
    Transaction create_txn(const Address& recipient, const std::vector<Value>& values, Tick time);

    [[nodiscard]] const std::vector<Transaction>& pending() const noexcept { return pending_; }

    /// Moves all pending transactions into one batch and returns its AccTxn.
    /// The batch is abandoned (values unlocked) once block `expiry_height` is
    /// processed without it. Returns nullopt when nothing is pending.
    std::optional<Submission> package_batch(std::uint64_t expiry_height);

    /// Signs and tracks a batch assembled outside the wallet (no values are
    /// locked or checked). Adversary scripts use this to equivocate.
    Submission package_external(TxnBatch batch, std::uint64_t expiry_height);

    /// VPBs produced for an included transaction. Throws NotYetIncluded while
    /// the transaction is pending or submitted, ProofUnavailable otherwise.
    [[nodiscard]] std::vector<VpbPair> transfer_vpb(const Transaction& txn) const;

    [[nodiscard]] std::size_t outstanding_batches() const noexcept { return outstanding_.size(); }

    /// What the wallet needs to process `block`, which must be the next height.
    [[nodiscard]] BlockNeed classify(const Block& block) const;

    /// The block included one of this wallet's batches. Every earlier holding
    /// gains the proof unit; each spent value leaves as an outgoing transfer.
    /// Throws ProofUnavailable when the proof matches no submitted batch.
    std::vector<OutgoingTransfer> apply_inclusion(const consensus::HeaderChain& chain, std::uint64_t index,
                                                  const crypto::MtreeProof& proof);

    /// The block's filter reports this wallet without a leaf for it.
    /// Throws ProofUnavailable when the element set does not rebuild the filter.
    void apply_false_positive(const consensus::HeaderChain& chain, const BloomProof& proof);

    /// The block's filter does not report this wallet.
    void apply_absent(std::uint64_t index);

    /// Verifies a received VPB and, on success, takes ownership and records a
    /// checkpoint at `txn_block`.
    VerifyResult accept(const consensus::HeaderChain& chain, VpbPair vpb, const Transaction& txn,
                        std::uint64_t txn_block, VerifyCache* cache = nullptr);

    /// Canonical bytes of all held VPBs.
    [[nodiscard]] std::uint64_t vpb_storage_bytes() const;
    /// Proof-unit payload of all held VPBs (see proof_unit_bytes()).
    [[nodiscard]] std::uint64_t proof_unit_storage_bytes() const;

    /// Blocks of recent evidence kept for values whose VPB arrives late.
    static constexpr std::uint64_t kEvidenceWindow = 256;
    /// Blocks for which transfer_vpb() can still answer.
    static constexpr std::uint64_t kSentWindow = 16;

private:
    struct Submitted {
        TxnBatchPtr batch;
        Digest leaf;
        std::uint64_t expiry = 0;
    };
    using Evidence = std::variant<ProofUnit, BloomProof>;

    void check_next(std::uint64_t index) const;
    void append_evidence(std::uint64_t index, const Evidence& ev);
    void finish_block(std::uint64_t index, const std::optional<Evidence>& ev);
    Holding* find_holding(const Value& v, bool locked);

    crypto::KeyPair key_;
    std::vector<Holding> holdings_;
    CheckpointStore checkpoints_;
    std::vector<Transaction> pending_;
    std::deque<Submitted> outstanding_;
    std::map<std::uint64_t, Evidence> recent_;
    std::map<std::uint64_t, std::vector<OutgoingTransfer>> sent_;
    std::uint64_t processed_ = 0;
};

}  // namespace ezchain::account
