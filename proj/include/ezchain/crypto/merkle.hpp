// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ezchain/core/bytes.hpp"
#include "ezchain/core/encoding.hpp"

namespace ezchain::crypto {

enum class Side : std::uint8_t { Left = 0, Right = 1 };

struct MerkleSibling {
    Digest digest;
    Side side;  // where the sibling sits relative to the running hash

    friend bool operator==(const MerkleSibling&, const MerkleSibling&) = default;
};

struct MtreeProof {
    Digest leaf;
    std::uint64_t leaf_index = 0;
    std::vector<MerkleSibling> siblings;

    friend bool operator==(const MtreeProof&, const MtreeProof&) = default;
};

/// Binary hash tree over leaf digests. Interior node = hash(left || right);
/// an odd node at the end of a layer is paired with itself. A single leaf is
/// its own root.
class MerkleTree {
public:
    /// Throws EmptyTree for an empty leaf list.
    static MerkleTree build(std::vector<Digest> leaves);

    [[nodiscard]] const Digest& root() const noexcept { return layers_.back().front(); }
    [[nodiscard]] std::size_t leaf_count() const noexcept { return layers_.front().size(); }
    [[nodiscard]] const std::vector<Digest>& leaves() const noexcept { return layers_.front(); }
    [[nodiscard]] std::size_t node_count() const noexcept;

    /// Throws IndexOutOfRange when leaf_index >= leaf_count().
    [[nodiscard]] MtreeProof prove(std::size_t leaf_index) const;

private:
    std::vector<std::vector<Digest>> layers_;
};

/// Replays `proof.siblings` from `proof.leaf` and compares with `root`.
/// Side flags must agree with the bits of `leaf_index`.
bool merkle_verify(const Digest& root, const MtreeProof& proof);

inline MerkleTree merkle_build(std::vector<Digest> leaves) { return MerkleTree::build(std::move(leaves)); }

/// Wire format: leaf_index u64 | count u32 | count x (side u8 | digest 32).
/// The leaf itself is not serialized; the receiver recomputes it.
void encode(Encoder& enc, const MtreeProof& proof);
inline std::uint64_t wire_size(const MtreeProof& proof) noexcept { return 8 + 4 + 33 * proof.siblings.size(); }
MtreeProof decode_mtree_proof(Decoder& dec, const Digest& leaf);

}  // namespace ezchain::crypto
