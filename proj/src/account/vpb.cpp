// SPDX-License-Identifier: Apache-2.0
#include "ezchain/account/vpb.hpp"

#include <utility>

#include "ezchain/core/error.hpp"

namespace ezchain::account {

bool operator==(const ProofUnit& a, const ProofUnit& b) {
    if (a.owner != b.owner || !(a.mtree_proof == b.mtree_proof)) return false;
    if (a.txns == b.txns) return true;
    return a.txns && b.txns && *a.txns == *b.txns;
}

bool operator==(const VpbPair& a, const VpbPair& b) {
    return a.value == b.value && a.proof == b.proof && a.block_indices == b.block_indices &&
           a.bloom_proofs == b.bloom_proofs && a.checkpoint == b.checkpoint;
}

std::vector<OwnerRun> owner_runs(const VpbPair& vpb) {
    std::vector<OwnerRun> runs;
    for (std::size_t i = 0; i < vpb.proof.size(); ++i) {
        if (runs.empty() || runs.back().owner != vpb.proof[i].owner) {
            runs.push_back(OwnerRun{vpb.proof[i].owner, i, i});
        } else {
            runs.back().last = i;
        }
    }
    return runs;
}

void append_unit(VpbPair& vpb, std::uint64_t index, ProofUnit unit) {
    if (!vpb.block_indices.empty() && vpb.block_indices.back() >= index) {
        throw Error(ErrorCode::IndexOutOfRange, "proof unit out of order");
    }
    vpb.proof.push_back(std::move(unit));
    vpb.block_indices.push_back(index);
}

std::size_t holder_count(const VpbPair& vpb) { return owner_runs(vpb).size(); }

bool can_transfer(const VpbPair& vpb, const Address& recipient) {
    if (!vpb.checkpoint) return true;
    for (const auto& u : vpb.proof) {
        if (u.owner == recipient) return true;
    }
    return false;
}

VpbPair truncate_for(const VpbPair& vpb, const Address& recipient) {
    std::optional<std::size_t> cut;
    for (std::size_t i = vpb.proof.size(); i-- > 0;) {
        if (vpb.proof[i].owner == recipient) {
            cut = i;
            break;
        }
    }
    if (!cut) {
        if (vpb.checkpoint) throw Error(ErrorCode::ProofUnavailable, "history before the checkpoint is not held");
        return vpb;
    }
    VpbPair out;
    out.value = vpb.value;
    const auto height = vpb.block_indices[*cut];
    out.proof.assign(vpb.proof.begin() + static_cast<std::ptrdiff_t>(*cut), vpb.proof.end());
    out.block_indices.assign(vpb.block_indices.begin() + static_cast<std::ptrdiff_t>(*cut), vpb.block_indices.end());
    for (const auto& bp : vpb.bloom_proofs) {
        if (bp.block_index > height) out.bloom_proofs.push_back(bp);
    }
    out.checkpoint = VpbCheckpoint{height, recipient};
    return out;
}

void encode(Encoder& enc, const ProofUnit& u) {
    enc.fixed(u.owner);
    if (u.txns) {
        encode(enc, *u.txns);
    } else {
        enc.u32(0);
    }
    encode(enc, u.mtree_proof);
}

void encode(Encoder& enc, const BloomProof& p) {
    enc.u64(p.block_index);
    enc.u32(static_cast<std::uint32_t>(p.elements.size()));
    for (const auto& a : p.elements) enc.fixed(a);
}

void encode(Encoder& enc, const VpbPair& v) {
    encode(enc, v.value);
    enc.u32(static_cast<std::uint32_t>(v.proof.size()));
    for (const auto& u : v.proof) encode(enc, u);
    enc.u32(static_cast<std::uint32_t>(v.block_indices.size()));
    for (auto h : v.block_indices) enc.u64(h);
    enc.u32(static_cast<std::uint32_t>(v.bloom_proofs.size()));
    for (const auto& p : v.bloom_proofs) encode(enc, p);
    enc.u8(v.checkpoint ? 1 : 0);
    if (v.checkpoint) {
        enc.u64(v.checkpoint->height);
        enc.fixed(v.checkpoint->owner);
    }
}

std::uint64_t wire_size(const ProofUnit& u) noexcept {
    return 32 + (u.txns ? wire_size(*u.txns) : 4) + crypto::wire_size(u.mtree_proof);
}

std::uint64_t wire_size(const VpbPair& v) noexcept {
    std::uint64_t n = 16 + 4 + 4 + 8 * v.block_indices.size() + 4 + 1;
    for (const auto& u : v.proof) n += wire_size(u);
    for (const auto& p : v.bloom_proofs) n += 8 + 4 + 32 * p.elements.size();
    if (v.checkpoint) n += 8 + 32;
    return n;
}

std::uint64_t proof_unit_bytes(const VpbPair& v) {
    std::uint64_t total = 0;
    for (const auto& u : v.proof) total += wire_size(u) + 8;
    return total;
}

}  // namespace ezchain::account
