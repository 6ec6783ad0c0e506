// SPDX-License-Identifier: Apache-2.0
#include "ezchain/crypto/merkle.hpp"

#include "ezchain/crypto/hash.hpp"

namespace ezchain::crypto {

MerkleTree MerkleTree::build(std::vector<Digest> leaves) {
    if (leaves.empty()) throw Error(ErrorCode::EmptyTree, "merkle tree needs at least one leaf");
    MerkleTree t;
    t.layers_.push_back(std::move(leaves));
    while (t.layers_.back().size() > 1) {
        const auto& below = t.layers_.back();
        std::vector<Digest> up;
        up.reserve((below.size() + 1) / 2);
        for (std::size_t i = 0; i < below.size(); i += 2) {
            const auto& right = i + 1 < below.size() ? below[i + 1] : below[i];
            up.push_back(hash_pair(below[i], right));
        }
        t.layers_.push_back(std::move(up));
    }
    return t;
}

std::size_t MerkleTree::node_count() const noexcept {
    std::size_t n = 0;
    for (const auto& l : layers_) n += l.size();
    return n;
}

MtreeProof MerkleTree::prove(std::size_t leaf_index) const {
    if (leaf_index >= leaf_count()) {
        throw Error(ErrorCode::IndexOutOfRange,
                    "leaf " + std::to_string(leaf_index) + " of " + std::to_string(leaf_count()));
    }
    MtreeProof proof{layers_.front()[leaf_index], leaf_index, {}};
    std::size_t idx = leaf_index;
    for (std::size_t level = 0; level + 1 < layers_.size(); ++level) {
        const auto& layer = layers_[level];
        if (idx % 2 == 0) {
            const auto& sib = idx + 1 < layer.size() ? layer[idx + 1] : layer[idx];
            proof.siblings.push_back({sib, Side::Right});
        } else {
            proof.siblings.push_back({layer[idx - 1], Side::Left});
        }
        idx /= 2;
    }
    return proof;
}

bool merkle_verify(const Digest& root, const MtreeProof& proof) {
    if (proof.siblings.size() >= 64) return false;
    if (proof.siblings.empty() && proof.leaf_index != 0) return false;
    if ((proof.leaf_index >> proof.siblings.size()) != 0) return false;
    Digest running = proof.leaf;
    std::uint64_t idx = proof.leaf_index;
    for (const auto& s : proof.siblings) {
        bool we_are_left = (idx & 1) == 0;
        if (we_are_left != (s.side == Side::Right)) return false;
        running = we_are_left ? hash_pair(running, s.digest) : hash_pair(s.digest, running);
        idx >>= 1;
    }
    return running == root;
}

void encode(Encoder& enc, const MtreeProof& proof) {
    enc.u64(proof.leaf_index);
    enc.u32(static_cast<std::uint32_t>(proof.siblings.size()));
    for (const auto& s : proof.siblings) {
        enc.u8(static_cast<std::uint8_t>(s.side));
        enc.fixed(s.digest);
    }
}

MtreeProof decode_mtree_proof(Decoder& dec, const Digest& leaf) {
    MtreeProof p{leaf, dec.u64(), {}};
    auto n = dec.u32();
    if (n >= 64) throw Error(ErrorCode::MalformedEncoding, "merkle proof too long");
    for (std::uint32_t i = 0; i < n; ++i) {
        auto side = dec.u8();
        if (side > 1) throw Error(ErrorCode::MalformedEncoding, "bad sibling side flag");
        p.siblings.push_back({dec.fixed<32, DigestTag>(), static_cast<Side>(side)});
    }
    return p;
}

}  // namespace ezchain::crypto
