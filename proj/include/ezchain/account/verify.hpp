// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string_view>
#include <unordered_map>

#include "ezchain/account/checkpoint.hpp"
#include "ezchain/account/vpb.hpp"
#include "ezchain/consensus/chain.hpp"

namespace ezchain::account {

enum class VerifyReason {
    Accept,
    MissingProof,
    BadMerkle,
    BadSignature,
    BadBloomProof,
    DoubleSpend,
    WrongTerminal,
    BadGenesis,
};

std::string_view to_string(VerifyReason r) noexcept;

struct VerifyResult {
    VerifyReason reason = VerifyReason::Accept;
    std::uint64_t blocks_scanned = 0;  // Bloom lookups over owner segments
    std::uint64_t proof_units = 0;
    std::uint64_t holders = 0;

    [[nodiscard]] bool accepted() const noexcept { return reason == VerifyReason::Accept; }
};

/// Memo of batch hashes and signature checks, keyed by batch identity. Holds a
/// reference to each batch so an address is never reused while cached. The
/// outcome of verify_vpb is the same with or without a cache.
class VerifyCache {
public:
    struct Entry {
        TxnBatchPtr batch;
        Digest leaf;
        std::optional<bool> signatures_ok;
    };

    Entry& lookup(const TxnBatchPtr& batch);
    [[nodiscard]] std::size_t size() const noexcept { return entries_.size(); }
    void clear() { entries_.clear(); }

private:
    std::unordered_map<const TxnBatch*, Entry> entries_;
};

struct VerifyRequest {
    const VpbPair* vpb = nullptr;
    const Transaction* txn = nullptr;  // the transfer being accepted
    std::uint64_t txn_block = 0;       // height that included txn
    Address verifier;
};

/// Recipient-side check of a transferred VPB against the local header chain.
/// Steps: checkpoint cut, Bloom-driven completeness per owner segment, Merkle
/// and signature checks per unit, Bloom proofs, double-spend scan, terminal.
VerifyResult verify_vpb(const consensus::HeaderChain& chain, const VerifyRequest& req,
                        const CheckpointStore& checkpoints, VerifyCache* cache = nullptr);

}  // namespace ezchain::account
