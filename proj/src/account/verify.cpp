// SPDX-License-Identifier: Apache-2.0
#include "ezchain/account/verify.hpp"

#include <algorithm>
#include <map>

#include "ezchain/crypto/hash.hpp"
#include "ezchain/crypto/keys.hpp"

namespace ezchain::account {

std::string_view to_string(VerifyReason r) noexcept {
    switch (r) {
        case VerifyReason::Accept: return "accept";
        case VerifyReason::MissingProof: return "missing_proof";
        case VerifyReason::BadMerkle: return "bad_merkle";
        case VerifyReason::BadSignature: return "bad_signature";
        case VerifyReason::BadBloomProof: return "bad_bloom_proof";
        case VerifyReason::DoubleSpend: return "double_spend";
        case VerifyReason::WrongTerminal: return "wrong_terminal";
        case VerifyReason::BadGenesis: return "bad_genesis";
    }
    return "unknown";
}

VerifyCache::Entry& VerifyCache::lookup(const TxnBatchPtr& batch) {
    auto it = entries_.find(batch.get());
    if (it == entries_.end()) {
        it = entries_.emplace(batch.get(), Entry{batch, crypto::hash(canonical_encode(*batch)), std::nullopt}).first;
    }
    return it->second;
}

namespace {

bool signatures_ok(const TxnBatch& batch, const Address& owner) {
    if (batch.txns.empty()) return false;
    for (const auto& t : batch.txns) {
        if (t.sender != owner) return false;
        if (!crypto::verify(owner, t.signing_bytes(), t.sig)) return false;
    }
    return true;
}

bool touches(const Transaction& t, const Value& v) {
    return std::any_of(t.values.begin(), t.values.end(), [&](const Value& x) { return x.intersects(v); });
}

bool covers(const Transaction& t, const Value& v) {
    return std::any_of(t.values.begin(), t.values.end(), [&](const Value& x) { return x.contains(v); });
}

class PositionCache {
public:
    const std::vector<std::uint64_t>& get(const crypto::BloomParams& p, const Address& a) {
        auto key = std::make_pair(a, std::make_pair(p.bits, p.hashes));
        auto it = cache_.find(key);
        if (it == cache_.end()) it = cache_.emplace(key, crypto::bloom_positions(p, a)).first;
        return it->second;
    }

private:
    std::map<std::pair<Address, std::pair<std::uint64_t, std::uint32_t>>, std::vector<std::uint64_t>> cache_;
};

}  // namespace

VerifyResult verify_vpb(const consensus::HeaderChain& chain, const VerifyRequest& req,
                        const CheckpointStore& checkpoints, VerifyCache* cache) {
    const VpbPair& v = *req.vpb;
    const Transaction& txn = *req.txn;
    VerifyResult res;
    auto fail = [&](VerifyReason r) {
        res.reason = r;
        return res;
    };

    const auto n = v.proof.size();
    res.proof_units = n;
    if (n == 0 || v.block_indices.size() != n) return fail(VerifyReason::MissingProof);
    for (std::size_t i = 0; i < n; ++i) {
        if (!v.proof[i].txns) return fail(VerifyReason::MissingProof);
        if (v.block_indices[i] == 0 || v.block_indices[i] > chain.height()) return fail(VerifyReason::MissingProof);
        if (i > 0 && v.block_indices[i] <= v.block_indices[i - 1]) return fail(VerifyReason::MissingProof);
    }
    const auto runs = owner_runs(v);
    res.holders = runs.size();

    // 1. checkpoint cut or genesis anchor
    std::size_t first_run = 0;
    if (v.checkpoint) {
        const auto& cp = *v.checkpoint;
        if (cp.owner != req.verifier || runs.size() < 2 || runs[0].owner != req.verifier || runs[0].last != 0 ||
            v.block_indices[0] != cp.height || !checkpoints.has(v.value, cp.height, req.verifier)) {
            return fail(VerifyReason::MissingProof);
        }
        first_run = 1;
    } else {
        const auto* g = chain.genesis().owner_of(v.value);
        if (g == nullptr || g->owner != runs[0].owner) return fail(VerifyReason::BadGenesis);
    }

    // 2. every Bloom-positive block of each owner segment is accounted for
    std::map<std::uint64_t, const BloomProof*> bloom_at;
    for (const auto& bp : v.bloom_proofs) {
        if (!bloom_at.emplace(bp.block_index, &bp).second) return fail(VerifyReason::BadBloomProof);
    }
    std::map<std::uint64_t, Address> bloom_owner;
    PositionCache positions;
    for (std::size_t r = first_run; r < runs.size(); ++r) {
        const auto& run = runs[r];
        const std::uint64_t start = r == 0 ? 0 : v.block_indices[runs[r - 1].last];
        const std::uint64_t end = v.block_indices[run.last];
        std::size_t j = run.first;
        for (std::uint64_t b = start + 1; b <= end; ++b) {
            const auto& bloom = chain.at(b).bloom;
            ++res.blocks_scanned;
            const bool positive = bloom.query_positions(positions.get(bloom.params(), run.owner));
            if (j <= run.last && v.block_indices[j] == b) {
                if (!positive) return fail(VerifyReason::BadMerkle);
                ++j;
            } else if (positive) {
                if (bloom_at.count(b) == 0) return fail(VerifyReason::MissingProof);
                bloom_owner.emplace(b, run.owner);
            }
        }
    }

    // 3. proof units: leaf, Merkle path, batch signatures by the unit owner
    for (std::size_t i = 0; i < n; ++i) {
        const auto& u = v.proof[i];
        const auto& block = chain.at(v.block_indices[i]);
        VerifyCache::Entry* entry = cache ? &cache->lookup(u.txns) : nullptr;
        const Digest leaf = entry ? entry->leaf : crypto::hash(canonical_encode(*u.txns));
        if (u.mtree_proof.leaf != leaf || !crypto::merkle_verify(block.mtree_root, u.mtree_proof)) {
            return fail(VerifyReason::BadMerkle);
        }
        bool sigs;
        if (entry && entry->signatures_ok && !u.txns->txns.empty() && u.txns->txns.front().sender == u.owner) {
            sigs = *entry->signatures_ok;
        } else {
            sigs = signatures_ok(*u.txns, u.owner);
            if (entry && !u.txns->txns.empty() && u.txns->txns.front().sender == u.owner) entry->signatures_ok = sigs;
        }
        if (!sigs) return fail(VerifyReason::BadSignature);
    }

    // 4. Bloom proofs rebuild the on-chain filter and exclude the owner
    for (const auto& bp : v.bloom_proofs) {
        auto owner = bloom_owner.find(bp.block_index);
        if (owner == bloom_owner.end()) return fail(VerifyReason::BadBloomProof);
        const auto& bloom = chain.at(bp.block_index).bloom;
        if (std::find(bp.elements.begin(), bp.elements.end(), owner->second) != bp.elements.end()) {
            return fail(VerifyReason::BadBloomProof);
        }
        if (crypto::bloom_rebuild(bp.elements, bloom.params()) != bloom) return fail(VerifyReason::BadBloomProof);
    }

    // 5. no owner touches the value before its hand-off; hand-offs chain owners
    for (std::size_t r = 0; r < runs.size(); ++r) {
        const auto& run = runs[r];
        const Address* next_owner = r + 1 < runs.size() ? &runs[r + 1].owner : nullptr;
        for (std::size_t i = run.first; i <= run.last; ++i) {
            std::vector<const Transaction*> touching;
            for (const auto& t : v.proof[i].txns->txns) {
                if (touches(t, v.value)) touching.push_back(&t);
            }
            if (i < run.last) {
                if (!touching.empty()) return fail(VerifyReason::DoubleSpend);
                continue;
            }
            if (touching.empty()) {
                return fail(r + 1 < runs.size() ? VerifyReason::MissingProof : VerifyReason::WrongTerminal);
            }
            if (touching.size() > 1) return fail(VerifyReason::DoubleSpend);
            if (r + 1 == runs.size()) break;
            if (!covers(*touching[0], v.value) || touching[0]->recipient != *next_owner) {
                return fail(VerifyReason::DoubleSpend);
            }
        }
    }

    // 6. the last unit carries the transfer being accepted
    const auto& last = v.proof.back().txns->txns;
    if (std::find(last.begin(), last.end(), txn) == last.end() || !covers(txn, v.value) ||
        txn.recipient != req.verifier || v.block_indices.back() != req.txn_block) {
        return fail(VerifyReason::WrongTerminal);
    }
    return res;
}

}  // namespace ezchain::account
