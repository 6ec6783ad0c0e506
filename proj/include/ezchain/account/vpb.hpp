// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ezchain/core/transaction.hpp"
#include "ezchain/core/value.hpp"
#include "ezchain/crypto/merkle.hpp"

namespace ezchain::account {

/// One link of a value's history: the owner's whole batch in one block plus
/// the Merkle proof placing hash(batch) under that block's root.
struct ProofUnit {
    Address owner;
    TxnBatchPtr txns;
    crypto::MtreeProof mtree_proof;
};

/// Complete element set of a block's Bloom filter, showing that an owner the
/// filter reports was never inserted.
struct BloomProof {
    std::uint64_t block_index = 0;
    std::vector<Address> elements;

    friend bool operator==(const BloomProof&, const BloomProof&) = default;
};

/// The history before `height` was validated by `owner` itself; the first
/// proof unit is `owner`'s own unit at `height`.
struct VpbCheckpoint {
    std::uint64_t height = 0;
    Address owner;

    friend bool operator==(const VpbCheckpoint&, const VpbCheckpoint&) = default;
};

/// Value, Proof, Block-index triple. `proof[i]` belongs to block `block_indices[i]`.
struct VpbPair {
    Value value{0, 0};
    std::vector<ProofUnit> proof;
    std::vector<std::uint64_t> block_indices;
    std::vector<BloomProof> bloom_proofs;
    std::optional<VpbCheckpoint> checkpoint;
};

bool operator==(const ProofUnit& a, const ProofUnit& b);
bool operator==(const VpbPair& a, const VpbPair& b);

/// Consecutive units with one owner. `first`/`last` index into `proof`.
struct OwnerRun {
    Address owner;
    std::size_t first = 0;
    std::size_t last = 0;
};

std::vector<OwnerRun> owner_runs(const VpbPair& vpb);

/// Appends `unit` at `index`; indices must stay strictly increasing.
void append_unit(VpbPair& vpb, std::uint64_t index, ProofUnit unit);

/// Owners visible after the checkpoint cut, in order (the CK_gap sample).
std::size_t holder_count(const VpbPair& vpb);

/// Whether `recipient` could verify this VPB: either the history is complete
/// from genesis or the recipient appears in it and can use its own checkpoint.
bool can_transfer(const VpbPair& vpb, const Address& recipient);

/// Copy for `recipient`, cut at the recipient's last unit when it appears.
/// Throws ProofUnavailable when can_transfer() is false.
VpbPair truncate_for(const VpbPair& vpb, const Address& recipient);

/// Wire formats (canonical encoding):
///   ProofUnit:  owner 32 | batch | MtreeProof
///   BloomProof: block_index u64 | count u32 | address 32 each
///   VpbPair:    value | count u32 | ProofUnit* | count u32 | u64* | count u32 |
///               BloomProof* | u8 has_checkpoint [| height u64 | owner 32]
void encode(Encoder& enc, const ProofUnit& u);
void encode(Encoder& enc, const BloomProof& p);
void encode(Encoder& enc, const VpbPair& v);

std::uint64_t wire_size(const ProofUnit& u) noexcept;
std::uint64_t wire_size(const VpbPair& v) noexcept;

/// Encoded bytes of the proof units plus their block indices; the quantity
/// the storage bound accounts for.
std::uint64_t proof_unit_bytes(const VpbPair& v);

}  // namespace ezchain::account
