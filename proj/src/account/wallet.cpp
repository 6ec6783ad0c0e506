// SPDX-License-Identifier: Apache-2.0
#include "ezchain/account/wallet.hpp"

#include <algorithm>

#include "ezchain/core/error.hpp"
#include "ezchain/crypto/hash.hpp"

namespace ezchain::account {

Wallet::Wallet(crypto::KeyPair key, const GenesisAllocation& genesis) : key_(std::move(key)) {
    for (const auto& v : genesis.values_of(key_.address())) {
        Holding h;
        h.vpb.value = v;
        holdings_.push_back(std::move(h));
    }
}

std::uint64_t Wallet::balance() const noexcept {
    std::uint64_t total = 0;
    for (const auto& h : holdings_) total += h.vpb.value.amount();
    return total;
}

std::uint64_t Wallet::spendable_to(const Address& recipient) const {
    std::uint64_t total = 0;
    for (const auto& h : holdings_) {
        if (!h.locked && can_transfer(h.vpb, recipient)) total += h.vpb.value.amount();
    }
    return total;
}

Holding* Wallet::find_holding(const Value& v, bool locked) {
    for (auto& h : holdings_) {
        if (h.vpb.value == v && h.locked == locked) return &h;
    }
    return nullptr;
}

Transaction Wallet::pay(const Address& recipient, std::uint64_t amount, SelectionStrategy strategy, Tick time) {
    if (recipient == address()) throw Error(ErrorCode::SelfTransfer, "payment to own address");
    std::vector<std::size_t> slots;
    std::vector<Candidate> candidates;
    for (std::size_t i = 0; i < holdings_.size(); ++i) {
        const auto& h = holdings_[i];
        if (h.locked || !can_transfer(h.vpb, recipient)) continue;
        slots.push_back(i);
        candidates.push_back(Candidate{h.vpb.value, h.vpb.proof.size()});
    }
    auto sel = select_values(candidates, amount, strategy);

    std::vector<Value> values;
    for (std::size_t k = 0; k < sel.chosen.size(); ++k) {
        auto& h = holdings_[slots[sel.chosen[k]]];
        if (k + 1 == sel.chosen.size() && sel.split_amount) {
            auto [paid, change] = h.vpb.value.split(*sel.split_amount);
            Holding rest = h;
            rest.vpb.value = change;
            h.vpb.value = paid;
            values.push_back(paid);
            holdings_.push_back(std::move(rest));
        } else {
            values.push_back(h.vpb.value);
        }
    }
    return create_txn(recipient, values, time);
}

Transaction Wallet::create_txn(const Address& recipient, const std::vector<Value>& values, Tick time) {
    if (recipient == address()) throw Error(ErrorCode::SelfTransfer, "payment to own address");
    if (values.empty() || !pairwise_disjoint(values)) throw Error(ErrorCode::InvalidValue, "transaction values");
    std::vector<Holding*> slots;
    for (const auto& v : values) {
        auto* h = find_holding(v, false);
        if (h == nullptr || !can_transfer(h->vpb, recipient)) {
            throw Error(ErrorCode::ValueNotHeld, "value [" + std::to_string(v.begin()) + ", " +
                                                     std::to_string(v.end()) + "] is not spendable");
        }
        slots.push_back(h);
    }
    for (auto* h : slots) h->locked = true;
    Transaction t{address(), recipient, values, time, {}};
    t.sig = key_.sign(t.signing_bytes());
    pending_.push_back(t);
    return t;
}

std::optional<Submission> Wallet::package_batch(std::uint64_t expiry_height) {
    if (pending_.empty()) return std::nullopt;
    auto batch = std::make_shared<const TxnBatch>(TxnBatch{std::move(pending_)});
    pending_.clear();
    Submitted s{batch, crypto::hash(canonical_encode(*batch)), expiry_height};
    AccTxn a{address(), s.leaf, key_.sign(s.leaf.span())};
    outstanding_.push_back(std::move(s));
    return Submission{a, batch};
}

Submission Wallet::package_external(TxnBatch batch, std::uint64_t expiry_height) {
    auto ptr = std::make_shared<const TxnBatch>(std::move(batch));
    Submitted s{ptr, crypto::hash(canonical_encode(*ptr)), expiry_height};
    AccTxn a{address(), s.leaf, key_.sign(s.leaf.span())};
    outstanding_.push_back(std::move(s));
    return Submission{a, ptr};
}

void Wallet::check_next(std::uint64_t index) const {
    if (index != processed_ + 1) {
        throw Error(ErrorCode::ChainMismatch, "wallet expects block " + std::to_string(processed_ + 1) + ", got " +
                                                  std::to_string(index));
    }
}

BlockNeed Wallet::classify(const Block& block) const {
    check_next(block.index);
    if (!block.bloom.query(address())) return BlockNeed::Nothing;
    return outstanding_.empty() ? BlockNeed::BloomProof : BlockNeed::MtreeProof;
}

void Wallet::append_evidence(std::uint64_t index, const Evidence& ev) {
    for (auto& h : holdings_) {
        if (h.acquired_height >= index) continue;
        if (const auto* u = std::get_if<ProofUnit>(&ev)) {
            h.vpb.proof.push_back(*u);
            h.vpb.block_indices.push_back(index);
        } else {
            h.vpb.bloom_proofs.push_back(std::get<BloomProof>(ev));
        }
    }
}

void Wallet::finish_block(std::uint64_t index, const std::optional<Evidence>& ev) {
    processed_ = index;
    if (ev) recent_.emplace(index, *ev);
    while (!recent_.empty() && recent_.begin()->first + kEvidenceWindow < index) recent_.erase(recent_.begin());
    while (!sent_.empty() && sent_.begin()->first + kSentWindow < index) sent_.erase(sent_.begin());

    for (auto it = outstanding_.begin(); it != outstanding_.end();) {
        if (it->expiry > index) {
            ++it;
            continue;
        }
        for (const auto& t : it->batch->txns) {
            for (const auto& v : t.values) {
                if (auto* h = find_holding(v, true)) h->locked = false;
            }
        }
        it = outstanding_.erase(it);
    }
}

std::vector<OutgoingTransfer> Wallet::apply_inclusion(const consensus::HeaderChain& chain, std::uint64_t index,
                                                      const crypto::MtreeProof& proof) {
    check_next(index);
    auto it = std::find_if(outstanding_.begin(), outstanding_.end(),
                           [&](const Submitted& s) { return s.leaf == proof.leaf; });
    if (it == outstanding_.end() || !crypto::merkle_verify(chain.at(index).mtree_root, proof)) {
        throw Error(ErrorCode::ProofUnavailable, "proof for block " + std::to_string(index) +
                                                     " matches no submitted batch");
    }
    const auto batch = it->batch;
    outstanding_.erase(it);

    ProofUnit unit{address(), batch, proof};
    Evidence ev = unit;
    append_evidence(index, ev);

    std::vector<OutgoingTransfer> out;
    for (const auto& t : batch->txns) {
        OutgoingTransfer tr{t.recipient, t, index, {}};
        for (const auto& v : t.values) {
            auto pos = std::find_if(holdings_.begin(), holdings_.end(),
                                    [&](const Holding& h) { return h.locked && h.vpb.value == v; });
            if (pos == holdings_.end()) continue;
            tr.vpbs.push_back(truncate_for(pos->vpb, t.recipient));
            holdings_.erase(pos);
            checkpoints_.record(CheckPoint{v, index, address()});
        }
        out.push_back(std::move(tr));
    }
    sent_[index] = out;
    finish_block(index, ev);
    return out;
}

std::vector<VpbPair> Wallet::transfer_vpb(const Transaction& txn) const {
    for (const auto& [_, transfers] : sent_) {
        for (const auto& t : transfers) {
            if (t.txn == txn) return t.vpbs;
        }
    }
    auto in = [&](const std::vector<Transaction>& txns) { return std::find(txns.begin(), txns.end(), txn) != txns.end(); };
    bool waiting = in(pending_);
    for (const auto& s : outstanding_) waiting = waiting || in(s.batch->txns);
    if (waiting) throw Error(ErrorCode::NotYetIncluded, "transaction awaits inclusion");
    throw Error(ErrorCode::ProofUnavailable, "transaction unknown to this wallet");
}

void Wallet::apply_false_positive(const consensus::HeaderChain& chain, const BloomProof& proof) {
    check_next(proof.block_index);
    const auto& bloom = chain.at(proof.block_index).bloom;
    if (std::find(proof.elements.begin(), proof.elements.end(), address()) != proof.elements.end() ||
        crypto::bloom_rebuild(proof.elements, bloom.params()) != bloom) {
        throw Error(ErrorCode::ProofUnavailable, "bloom proof for block " + std::to_string(proof.block_index) +
                                                     " does not show a false positive");
    }
    Evidence ev = proof;
    append_evidence(proof.block_index, ev);
    finish_block(proof.block_index, ev);
}

void Wallet::apply_absent(std::uint64_t index) {
    check_next(index);
    finish_block(index, std::nullopt);
}

VerifyResult Wallet::accept(const consensus::HeaderChain& chain, VpbPair vpb, const Transaction& txn,
                            std::uint64_t txn_block, VerifyCache* cache) {
    for (const auto& h : holdings_) {
        if (h.vpb.value.intersects(vpb.value)) return VerifyResult{VerifyReason::DoubleSpend, 0, 0, 0};
    }
    // A value this wallet already passed on after txn_block is a replay.
    if (auto seen = checkpoints_.height_for(vpb.value); seen && *seen >= txn_block) {
        return VerifyResult{VerifyReason::DoubleSpend, 0, 0, 0};
    }
    VerifyRequest req{&vpb, &txn, txn_block, address()};
    auto res = verify_vpb(chain, req, checkpoints_, cache);
    if (!res.accepted()) return res;
    if (txn_block + kEvidenceWindow < processed_) {
        throw Error(ErrorCode::ProofUnavailable, "own evidence since block " + std::to_string(txn_block) +
                                                     " is no longer cached");
    }
    Holding h{std::move(vpb), txn_block, false};
    const auto value = h.vpb.value;
    holdings_.push_back(std::move(h));
    for (auto it = recent_.upper_bound(txn_block); it != recent_.end(); ++it) {
        auto& held = holdings_.back();
        if (const auto* u = std::get_if<ProofUnit>(&it->second)) {
            held.vpb.proof.push_back(*u);
            held.vpb.block_indices.push_back(it->first);
        } else {
            held.vpb.bloom_proofs.push_back(std::get<BloomProof>(it->second));
        }
    }
    checkpoints_.record(CheckPoint{value, txn_block, address()});
    return res;
}

std::uint64_t Wallet::vpb_storage_bytes() const {
    std::uint64_t total = 0;
    for (const auto& h : holdings_) total += wire_size(h.vpb);
    return total;
}

std::uint64_t Wallet::proof_unit_storage_bytes() const {
    std::uint64_t total = 0;
    for (const auto& h : holdings_) total += proof_unit_bytes(h.vpb);
    return total;
}

}  // namespace ezchain::account
