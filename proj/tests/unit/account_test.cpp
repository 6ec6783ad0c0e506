// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>

#include "ezchain/account/checkpoint.hpp"
#include "ezchain/account/selection.hpp"
#include "ezchain/account/verify.hpp"
#include "ezchain/account/vpb.hpp"
#include "ezchain/account/wallet.hpp"
#include "ezchain/core/error.hpp"
#include "ezchain/crypto/bloom.hpp"
#include "ezchain/crypto/hash.hpp"
#include "fixtures.hpp"
#include "mini_ledger.hpp"
#include "ezchain/harness/replayer.hpp"

using namespace ezchain;
using namespace ezchain::account;
using ezchain::testing::MiniLedger;
using ezchain::harness::Replayer;

namespace {

consensus::ConsensusParams roomy() {
    consensus::ConsensusParams p;
    p.bloom = crypto::BloomParams{1u << 16, 7};
    p.retention_window = 1000;
    return p;
}

consensus::ConsensusParams cramped() {
    consensus::ConsensusParams p;
    p.bloom = crypto::BloomParams{64, 1};
    p.retention_window = 1000;
    return p;
}

std::vector<Candidate> cands(std::initializer_list<std::pair<Value, std::size_t>> list) {
    std::vector<Candidate> out;
    for (const auto& [v, n] : list) out.push_back(Candidate{v, n});
    return out;
}

const Holding& holding_with(Wallet& w, const Value& v) {
    for (const auto& h : w.holdings()) {
        if (h.vpb.value == v) return h;
    }
    throw std::logic_error("value not held");
}

ProofUnit unit_of(MiniLedger& led, std::size_t who, std::uint64_t index) {
    auto proof = led.proof_for(index, led.addr(who));
    for (const auto& b : led.batches().at(index)) {
        if (crypto::hash(canonical_encode(*b)) == proof.leaf) return ProofUnit{led.addr(who), b, proof};
    }
    throw std::logic_error("batch not found");
}

// Two wallets whose addresses share every filter bit, so the first sees a
// false positive whenever the second submits alone.
std::pair<std::size_t, std::size_t> colliding_pair(const MiniLedger& led) {
    const auto params = led.headers().at(0).bloom.params();
    for (std::size_t i = 0; i < led.size(); ++i) {
        for (std::size_t j = 0; j < led.size(); ++j) {
            if (i != j && crypto::bloom_positions(params, led.addr(i)) == crypto::bloom_positions(params, led.addr(j))) {
                return {i, j};
            }
        }
    }
    throw std::logic_error("no colliding wallets");
}

std::size_t other_than(std::size_t a, std::size_t b) {
    std::size_t c = 0;
    while (c == a || c == b) ++c;
    return c;
}

}  // namespace

TEST(Selection, NaiveExactPrefix) {
    auto s = select_values(cands({{Value(0, 49), 0}, {Value(100, 149), 0}}), 50, SelectionStrategy::Naive);
    EXPECT_EQ(s.chosen, (std::vector<std::size_t>{0}));
    EXPECT_FALSE(s.split_amount);
}

TEST(Selection, NaiveSplitsLastValue) {
    auto c = cands({{Value(0, 49), 0}, {Value(100, 149), 0}});
    auto s = select_values(c, 70, SelectionStrategy::Naive);
    ASSERT_EQ(s.chosen, (std::vector<std::size_t>{0, 1}));
    ASSERT_TRUE(s.split_amount);
    auto [paid, change] = c[1].value.split(*s.split_amount);
    EXPECT_EQ(paid, Value(100, 119));
    EXPECT_EQ(change, Value(120, 149));
}

TEST(Selection, InsufficientFunds) {
    auto c = cands({{Value(0, 49), 0}, {Value(100, 199), 0}});
    for (auto st : {SelectionStrategy::Naive, SelectionStrategy::MinProofSize, SelectionStrategy::NoSplit}) {
        try {
            (void)select_values(c, 200, st);
            FAIL();
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), ErrorCode::InsufficientFunds);
        }
    }
}

TEST(Selection, MinProofSizePrefersShortHistory) {
    auto c = cands({{Value(0, 99), 9}, {Value(100, 199), 2}});
    auto s = select_values(c, 60, SelectionStrategy::MinProofSize);
    EXPECT_EQ(s.chosen, (std::vector<std::size_t>{1}));
    EXPECT_EQ(s.split_amount, 60u);
}

TEST(Selection, NoSplitFindsExactSubset) {
    auto c = cands({{Value(0, 29), 0}, {Value(30, 99), 0}, {Value(100, 149), 0}});
    auto s = select_values(c, 100, SelectionStrategy::NoSplit);
    auto chosen = s.chosen;
    std::sort(chosen.begin(), chosen.end());
    EXPECT_EQ(chosen, (std::vector<std::size_t>{0, 1}));
    EXPECT_FALSE(s.split_amount);
}

TEST(Selection, NoSplitFallsBackToMinProofSize) {
    auto c = cands({{Value(0, 29), 5}, {Value(30, 99), 1}, {Value(100, 149), 3}});
    auto s = select_values(c, 45, SelectionStrategy::NoSplit);
    auto m = select_values(c, 45, SelectionStrategy::MinProofSize);
    EXPECT_EQ(s.chosen, m.chosen);
    EXPECT_EQ(s.split_amount, m.split_amount);
    EXPECT_TRUE(s.split_amount);
}

TEST(Selection, RandomResultsCoverTarget) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<Candidate> c;
        std::uint64_t at = 0, total = 0;
        const auto n = 1 + rng() % 8;
        for (std::size_t i = 0; i < n; ++i) {
            const auto len = 1 + rng() % 40;
            c.push_back(Candidate{Value(at, at + len - 1), rng() % 10});
            at += len + rng() % 3;
            total += len;
        }
        const auto target = 1 + rng() % total;
        for (auto st : {SelectionStrategy::Naive, SelectionStrategy::MinProofSize, SelectionStrategy::NoSplit}) {
            auto s = select_values(c, target, st);
            std::uint64_t sum = 0;
            for (std::size_t k = 0; k < s.chosen.size(); ++k) {
                const auto amt = c[s.chosen[k]].value.amount();
                if (k + 1 == s.chosen.size() && s.split_amount) {
                    ASSERT_LT(*s.split_amount, amt);
                    sum += *s.split_amount;
                } else {
                    sum += amt;
                }
            }
            ASSERT_EQ(sum, target) << to_string(st);
        }
    }
}

TEST(Selection, ParseNames) {
    EXPECT_EQ(parse_selection("naive"), SelectionStrategy::Naive);
    EXPECT_EQ(parse_selection(to_string(SelectionStrategy::MinProofSize)), SelectionStrategy::MinProofSize);
    EXPECT_EQ(parse_selection(to_string(SelectionStrategy::NoSplit)), SelectionStrategy::NoSplit);
    EXPECT_THROW((void)parse_selection("greedy"), Error);
}

TEST(Wallet, CreateTxnSignsAndLocks) {
    MiniLedger led(2, 100, roomy());
    auto& w = led.wallet(0);
    auto t = w.create_txn(led.addr(1), {Value(0, 99)}, 5);
    EXPECT_TRUE(crypto::verify(w.address(), t.signing_bytes(), t.sig));
    EXPECT_TRUE(w.holdings()[0].locked);
    EXPECT_EQ(w.spendable_to(led.addr(1)), 0u);
    try {
        (void)w.create_txn(led.addr(1), {Value(0, 99)}, 6);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ValueNotHeld);
    }
}

TEST(Wallet, CreateTxnRejectsForeignValue) {
    MiniLedger led(2, 100, roomy());
    try {
        (void)led.wallet(0).create_txn(led.addr(1), {Value(100, 199)}, 1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ValueNotHeld);
    }
    EXPECT_THROW((void)led.wallet(0).create_txn(led.addr(0), {Value(0, 99)}, 1), Error);
}

TEST(Wallet, PaySplitKeepsChangeUnlocked) {
    MiniLedger led(2, 100, roomy());
    auto& w = led.wallet(0);
    auto t = w.pay(led.addr(1), 30, SelectionStrategy::Naive, 1);
    EXPECT_EQ(t.values, (std::vector<Value>{Value(0, 29)}));
    EXPECT_EQ(w.balance(), 100u);
    EXPECT_EQ(w.spendable_to(led.addr(1)), 70u);
    ASSERT_TRUE(led.step());
    EXPECT_EQ(w.balance(), 70u);
    EXPECT_EQ(led.wallet(1).balance(), 130u);
}

TEST(Wallet, PackageBatchHashesPendingTxns) {
    MiniLedger led(2, 90, roomy(), 3);
    auto& w = led.wallet(0);
    EXPECT_FALSE(w.package_batch(1));
    for (auto v : {Value(0, 29), Value(30, 59), Value(60, 89)}) (void)w.create_txn(led.addr(1), {v}, 1);
    auto sub = w.package_batch(1);
    ASSERT_TRUE(sub);
    ASSERT_EQ(sub->batch->txns.size(), 3u);
    EXPECT_EQ(sub->acctxn.txns_hash, crypto::hash(canonical_encode(*sub->batch)));
    EXPECT_TRUE(crypto::verify(w.address(), sub->acctxn.txns_hash.span(), sub->acctxn.sig));
    EXPECT_TRUE(w.pending().empty());
    EXPECT_EQ(w.outstanding_batches(), 1u);
}

TEST(Wallet, ExpiredBatchUnlocksValues) {
    MiniLedger led(2, 100, roomy());
    auto& w = led.wallet(0);
    (void)w.create_txn(led.addr(1), {Value(0, 99)}, 1);
    (void)w.package_batch(1);  // never reaches the pool
    (void)led.mine();
    EXPECT_EQ(w.outstanding_batches(), 0u);
    EXPECT_FALSE(w.holdings()[0].locked);
}

TEST(Wallet, IncludedBatchFormsVerifyingProofUnit) {
    MiniLedger led(2, 100, roomy());
    (void)led.wallet(0).pay(led.addr(1), 100, SelectionStrategy::Naive, 1);
    auto transfers = led.mine();
    ASSERT_EQ(transfers.size(), 1u);
    ASSERT_EQ(transfers[0].vpbs.size(), 1u);
    const auto& u = transfers[0].vpbs[0].proof.back();
    EXPECT_TRUE(crypto::merkle_verify(led.headers().at(1).mtree_root, u.mtree_proof));
    EXPECT_EQ(u.mtree_proof.leaf, crypto::hash(canonical_encode(*u.txns)));
}

TEST(Vpb, NonTouchingBatchAddsAbsenceUnit) {
    MiniLedger led(2, 100, roomy(), 2);
    (void)led.wallet(0).create_txn(led.addr(1), {Value(0, 49)}, 1);
    ASSERT_TRUE(led.step());
    const auto& h = holding_with(led.wallet(0), Value(50, 99));
    ASSERT_EQ(h.vpb.block_indices, (std::vector<std::uint64_t>{1}));
    for (const auto& t : h.vpb.proof[0].txns->txns) {
        for (const auto& v : t.values) EXPECT_FALSE(v.intersects(h.vpb.value));
    }
}

TEST(Vpb, SilentBlockLeavesVpbUnchanged) {
    MiniLedger led(3, 100, roomy());
    const auto before = led.wallet(0).holdings()[0].vpb;
    (void)led.wallet(1).pay(led.addr(2), 10, SelectionStrategy::Naive, 1);
    ASSERT_TRUE(led.step());
    ASSERT_FALSE(led.headers().at(1).bloom.query(led.addr(0)));
    EXPECT_EQ(led.wallet(0).holdings()[0].vpb, before);
}

TEST(Vpb, FalsePositiveAddsBloomProof) {
    MiniLedger led(16, 100, cramped());
    auto [victim, sender] = colliding_pair(led);
    const auto to = other_than(victim, sender);
    (void)led.wallet(sender).pay(led.addr(to), 1, SelectionStrategy::Naive, 1);
    ASSERT_TRUE(led.step());
    ASSERT_TRUE(led.headers().at(1).bloom.query(led.addr(victim)));
    const auto& vpb = led.wallet(victim).holdings()[0].vpb;
    EXPECT_TRUE(vpb.proof.empty());
    ASSERT_EQ(vpb.bloom_proofs.size(), 1u);
    EXPECT_EQ(vpb.bloom_proofs[0].block_index, 1u);
    EXPECT_EQ(vpb.bloom_proofs[0].elements, (std::vector<Address>{led.addr(sender)}));
}

TEST(Vpb, TransferBeforeInclusion) {
    MiniLedger led(2, 100, roomy());
    auto t = led.wallet(0).pay(led.addr(1), 100, SelectionStrategy::Naive, 1);
    try {
        (void)led.wallet(0).transfer_vpb(t);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NotYetIncluded);
    }
    (void)led.wallet(0).package_batch(1);
    EXPECT_THROW((void)led.wallet(0).transfer_vpb(t), Error);
}

TEST(Vpb, OneVpbPerValueWithTxnInLastUnit) {
    MiniLedger led(2, 90, roomy(), 3);
    auto t = led.wallet(0).create_txn(led.addr(1), {Value(0, 29), Value(60, 89)}, 1);
    ASSERT_TRUE(led.step());
    auto vpbs = led.wallet(0).transfer_vpb(t);
    ASSERT_EQ(vpbs.size(), 2u);
    EXPECT_EQ(vpbs[0].value, Value(0, 29));
    EXPECT_EQ(vpbs[1].value, Value(60, 89));
    for (const auto& v : vpbs) {
        const auto& txns = v.proof.back().txns->txns;
        EXPECT_NE(std::find(txns.begin(), txns.end(), t), txns.end());
    }
}

TEST(Vpb, EncodingSizeMatchesLayout) {
    MiniLedger led(2, 100, roomy());
    auto t = led.wallet(0).pay(led.addr(1), 100, SelectionStrategy::Naive, 1);
    ASSERT_TRUE(led.step());
    auto vpb = led.wallet(0).transfer_vpb(t)[0];
    const auto units = encoded_size(vpb.proof[0]);
    EXPECT_EQ(proof_unit_bytes(vpb), units + 8);
    EXPECT_EQ(encoded_size(vpb), 16u + 4 + units + 4 + 8 + 4 + 1);
}

TEST(Verify, HonestThreeHopAccepts) {
    MiniLedger led(4, 100, roomy());
    for (std::size_t hop = 0; hop < 3; ++hop) {
        (void)led.wallet(hop).create_txn(led.addr(hop + 1), {Value(0, 99)}, hop);
        auto results = led.deliver(led.mine());
        ASSERT_EQ(results.size(), 1u);
        EXPECT_TRUE(results[0].accepted()) << to_string(results[0].reason);
        EXPECT_EQ(results[0].holders, hop + 1);
    }
    EXPECT_EQ(led.wallet(3).balance(), 200u);
    EXPECT_EQ(holding_with(led.wallet(3), Value(0, 99)).vpb.proof.size(), 3u);
}

TEST(Verify, AcceptRecordsCheckpointAndBalance) {
    MiniLedger led(2, 100, roomy());
    (void)led.wallet(0).pay(led.addr(1), 40, SelectionStrategy::Naive, 1);
    ASSERT_TRUE(led.step());
    EXPECT_EQ(led.wallet(1).balance(), 140u);
    EXPECT_EQ(led.wallet(1).checkpoints().height_for(Value(0, 39)), 1u);
    std::vector<Value> held;
    for (const auto& h : led.wallet(1).holdings()) held.push_back(h.vpb.value);
    EXPECT_TRUE(pairwise_disjoint(held));
}

TEST(Verify, ReturnedValueUsesOwnCheckpoint) {
    MiniLedger led(2, 100, roomy());
    (void)led.wallet(0).pay(led.addr(1), 100, SelectionStrategy::Naive, 1);
    ASSERT_TRUE(led.step());  // alpha = 1
    ASSERT_TRUE(led.step());
    ASSERT_TRUE(led.step());
    (void)led.wallet(1).create_txn(led.addr(0), {Value(0, 99)}, 4);
    auto transfers = led.mine();  // beta = 4
    ASSERT_EQ(transfers[0].vpbs.size(), 1u);
    const auto& vpb = transfers[0].vpbs[0];
    ASSERT_TRUE(vpb.checkpoint);
    EXPECT_EQ(vpb.checkpoint->height, 1u);
    auto results = led.deliver(transfers);
    ASSERT_TRUE(results[0].accepted()) << to_string(results[0].reason);
    EXPECT_EQ(results[0].blocks_scanned, 3u);

    // The same history without the cut scans from genesis.
    VpbPair full = vpb;
    full.checkpoint.reset();
    CheckpointStore none;
    VerifyRequest req{&full, &transfers[0].txn, 4, led.addr(0)};
    auto res = verify_vpb(led.headers(), req, none);
    ASSERT_TRUE(res.accepted()) << to_string(res.reason);
    EXPECT_EQ(res.blocks_scanned, 4u);
}

TEST(Verify, CheckpointWithoutLocalRecordIsRejected) {
    MiniLedger led(3, 100, roomy());
    (void)led.wallet(0).pay(led.addr(1), 100, SelectionStrategy::Naive, 1);
    ASSERT_TRUE(led.step());
    (void)led.wallet(1).create_txn(led.addr(0), {Value(0, 99)}, 2);
    auto transfers = led.mine();
    auto vpb = transfers[0].vpbs[0];
    CheckpointStore none;
    VerifyRequest req{&vpb, &transfers[0].txn, 2, led.addr(0)};
    EXPECT_EQ(verify_vpb(led.headers(), req, none).reason, VerifyReason::MissingProof);
}

namespace {

struct Omission {
    VpbPair shadow;
    Transaction spend;
    std::uint64_t spend_block = 0;
    Transaction respend;
    std::uint64_t respend_block = 0;
};

// Owner `a` pays X legitimately, then signs the same value to Y one block
// later while holding on to the VPB it had before the first spend.
Omission stage_omission(MiniLedger& led, std::size_t a, std::size_t x, std::size_t y, const Value& v) {
    Omission o;
    o.shadow = holding_with(led.wallet(a), v).vpb;
    o.spend = led.wallet(a).create_txn(led.addr(x), {v}, 1);
    auto first = led.deliver(led.mine());
    for (const auto& r : first) EXPECT_TRUE(r.accepted());
    o.spend_block = led.headers().height();
    o.respend = ezchain::testing::signed_txn(led.key(a), led.addr(y), {v}, 2);
    o.respend_block = led.mine_with_foreign_batch(a, TxnBatch{{o.respend}});
    (void)led.deliver(led.take_pending());
    return o;
}

VerifyResult present(MiniLedger& led, std::size_t y, const VpbPair& vpb, const Omission& o) {
    return led.wallet(y).accept(led.headers(), vpb, o.respend, o.respend_block);
}

}  // namespace

TEST(Verify, OmittedSpendBlockIsMissingProof) {
    MiniLedger led(3, 100, roomy());
    auto o = stage_omission(led, 0, 1, 2, Value(0, 99));
    auto forged = o.shadow;
    append_unit(forged, o.respend_block, unit_of(led, 0, o.respend_block));
    EXPECT_EQ(present(led, 2, forged, o).reason, VerifyReason::MissingProof);
    EXPECT_EQ(led.wallet(2).balance(), 100u);
}

TEST(Verify, DisclosedSpendIsDoubleSpend) {
    MiniLedger led(3, 100, roomy());
    auto o = stage_omission(led, 0, 1, 2, Value(0, 99));
    auto forged = o.shadow;
    append_unit(forged, o.spend_block, unit_of(led, 0, o.spend_block));
    append_unit(forged, o.respend_block, unit_of(led, 0, o.respend_block));
    EXPECT_EQ(present(led, 2, forged, o).reason, VerifyReason::DoubleSpend);
}

TEST(Verify, TwoSpendsInOneBatchAreDoubleSpend) {
    MiniLedger led(3, 100, roomy());
    auto t1 = ezchain::testing::signed_txn(led.key(0), led.addr(1), {Value(0, 99)}, 1);
    auto t2 = ezchain::testing::signed_txn(led.key(0), led.addr(2), {Value(0, 49)}, 1);
    const auto b = led.mine_with_foreign_batch(0, TxnBatch{{t1, t2}});
    VpbPair v;
    v.value = Value(0, 99);
    append_unit(v, b, unit_of(led, 0, b));
    EXPECT_EQ(led.wallet(1).accept(led.headers(), v, t1, b).reason, VerifyReason::DoubleSpend);
}

TEST(Verify, TamperedBatchIsBadMerkle) {
    MiniLedger led(3, 100, roomy());
    auto t = led.wallet(0).pay(led.addr(1), 100, SelectionStrategy::Naive, 1);
    auto transfers = led.mine();
    auto vpb = transfers[0].vpbs[0];
    auto batch = *vpb.proof.back().txns;
    batch.txns[0].time += 1;
    vpb.proof.back().txns = std::make_shared<const TxnBatch>(batch);
    auto res = led.wallet(1).accept(led.headers(), vpb, batch.txns[0], 1);
    EXPECT_EQ(res.reason, VerifyReason::BadMerkle);

    auto moved = transfers[0].vpbs[0];
    moved.block_indices.back() = 2;
    (void)led.mine();
    EXPECT_NE(led.wallet(1).accept(led.headers(), moved, t, 1).reason, VerifyReason::Accept);
}

TEST(Verify, ForgedSignatureIsBadSignature) {
    MiniLedger led(3, 100, roomy(), 2);  // wallet 0 holds [0,49] and [50,99]
    (void)led.wallet(0).create_txn(led.addr(2), {Value(0, 49)}, 1);
    Transaction forged{led.addr(0), led.addr(1), {Value(50, 99)}, 1, {}};
    forged.sig = led.key(1).sign(forged.signing_bytes());
    const auto b = led.mine_with_foreign_batch(1, TxnBatch{{forged}});
    (void)led.deliver(led.take_pending());
    VpbPair claim;
    claim.value = Value(50, 99);
    auto unit = unit_of(led, 1, b);
    unit.owner = led.addr(0);
    append_unit(claim, b, unit);
    EXPECT_EQ(led.wallet(1).accept(led.headers(), claim, forged, b).reason, VerifyReason::BadSignature);
}

TEST(Verify, StaleReplayIsRejected) {
    MiniLedger led(4, 100, roomy());
    (void)led.wallet(0).pay(led.addr(1), 100, SelectionStrategy::Naive, 1);
    auto first = led.mine();
    ASSERT_TRUE(led.deliver(first)[0].accepted());
    (void)led.wallet(1).create_txn(led.addr(2), {Value(0, 99)}, 2);
    auto second = led.mine();
    ASSERT_TRUE(led.deliver(second)[0].accepted());

    EXPECT_EQ(led.deliver(first)[0].reason, VerifyReason::DoubleSpend);
    EXPECT_EQ(led.deliver(second)[0].reason, VerifyReason::DoubleSpend);
    const auto& f = first[0];
    auto res = led.wallet(3).accept(led.headers(), f.vpbs[0], f.txn, f.txn_block);
    EXPECT_EQ(res.reason, VerifyReason::WrongTerminal);
}

TEST(Verify, WrongGenesisOwner) {
    MiniLedger led(3, 100, roomy());
    Transaction t = led.wallet(0).pay(led.addr(2), 100, SelectionStrategy::Naive, 1);
    auto transfers = led.mine();
    auto vpb = transfers[0].vpbs[0];
    vpb.value = Value(100, 199);
    CheckpointStore none;
    VerifyRequest req{&vpb, &t, 1, led.addr(2)};
    EXPECT_EQ(verify_vpb(led.headers(), req, none).reason, VerifyReason::BadGenesis);
}

TEST(Verify, TamperedBloomProof) {
    MiniLedger led(16, 100, cramped());
    auto [victim, sender] = colliding_pair(led);
    const auto to = other_than(victim, sender);
    (void)led.wallet(sender).pay(led.addr(to), 1, SelectionStrategy::Naive, 1);
    ASSERT_TRUE(led.step());
    auto t = led.wallet(victim).pay(led.addr(to), 100, SelectionStrategy::Naive, 2);
    auto transfers = led.mine();
    ASSERT_EQ(transfers.size(), 1u);
    const auto& vpb = transfers[0].vpbs.at(0);
    ASSERT_EQ(vpb.bloom_proofs.size(), 1u);
    const auto& cps = led.wallet(to).checkpoints();

    auto listed = vpb;
    listed.bloom_proofs[0].elements.push_back(led.addr(victim));
    VerifyRequest r1{&listed, &t, 2, led.addr(to)};
    EXPECT_EQ(verify_vpb(led.headers(), r1, cps).reason, VerifyReason::BadBloomProof);

    auto partial = vpb;
    partial.bloom_proofs[0].elements.clear();
    VerifyRequest r2{&partial, &t, 2, led.addr(to)};
    EXPECT_EQ(verify_vpb(led.headers(), r2, cps).reason, VerifyReason::BadBloomProof);

    auto dropped = vpb;
    dropped.bloom_proofs.clear();
    VerifyRequest r3{&dropped, &t, 2, led.addr(to)};
    EXPECT_EQ(verify_vpb(led.headers(), r3, cps).reason, VerifyReason::MissingProof);

    auto results = led.deliver(transfers);
    EXPECT_TRUE(results[0].accepted()) << to_string(results[0].reason);
}

TEST(Verify, CacheDoesNotChangeOutcome) {
    MiniLedger led(4, 100, roomy());
    (void)led.wallet(0).pay(led.addr(1), 100, SelectionStrategy::Naive, 1);
    auto transfers = led.mine();
    auto vpb = transfers[0].vpbs[0];
    auto batch = *vpb.proof.back().txns;
    batch.txns[0].sig.bytes[0] ^= 1;
    auto bad = vpb;
    bad.proof.back().txns = std::make_shared<const TxnBatch>(batch);
    VerifyCache cache;
    CheckpointStore none;
    for (int i = 0; i < 2; ++i) {
        VerifyRequest good{&vpb, &transfers[0].txn, 1, led.addr(1)};
        VerifyRequest tampered{&bad, &batch.txns[0], 1, led.addr(1)};
        EXPECT_EQ(verify_vpb(led.headers(), good, none, &cache).reason,
                  verify_vpb(led.headers(), good, none).reason);
        EXPECT_EQ(verify_vpb(led.headers(), tampered, none, &cache).reason,
                  verify_vpb(led.headers(), tampered, none).reason);
    }
}

TEST(Checkpoint, HeightsNeverDecrease) {
    CheckpointStore s;
    const auto a = ezchain::testing::test_key(1).address();
    s.record(CheckPoint{Value(0, 99), 5, a});
    s.record(CheckPoint{Value(0, 49), 3, a});
    EXPECT_EQ(s.height_for(Value(0, 49)), 5u);
    s.record(CheckPoint{Value(0, 99), 9, a});
    EXPECT_EQ(s.size(), 1u);
    EXPECT_EQ(s.height_for(Value(10, 20)), 9u);
    EXPECT_TRUE(s.has(Value(10, 20), 9, a));
    EXPECT_FALSE(s.has(Value(10, 20), 5, a));
    EXPECT_FALSE(s.height_for(Value(100, 120)));
    EXPECT_EQ(s.storage_bytes(), 56u);
}

namespace {

struct RunStats {
    std::size_t transfers = 0;
    std::size_t rejected = 0;
    std::size_t mismatches = 0;
};

// Random payments with occasional spend-then-omit attacks. Every decision a
// recipient makes is compared with the replayer.
RunStats oracle_run(std::uint64_t seed, consensus::ConsensusParams params, std::size_t accounts, std::size_t blocks) {
    std::mt19937_64 rng(seed);
    MiniLedger led(accounts, 60, params, 2);
    Replayer oracle(led.genesis());
    RunStats st;
    std::map<std::pair<std::size_t, std::uint64_t>, std::uint64_t> cp_seen;

    auto replay = [&] {
        while (oracle.height() < led.headers().height()) {
            const auto h = oracle.height() + 1;
            std::vector<TxnBatch> bs;
            if (auto it = led.batches().find(h); it != led.batches().end()) {
                for (const auto& b : it->second) bs.push_back(*b);
            }
            oracle.apply_block(h, bs);
        }
    };
    auto judge = [&](const OutgoingTransfer& tr, const VpbPair& vpb, const VerifyResult& r) {
        ++st.transfers;
        if (!r.accepted()) ++st.rejected;
        auto want = oracle.legit(tr.txn, vpb.value, tr.txn_block);
        if (!want || *want != r.accepted()) ++st.mismatches;
    };
    auto deliver_all = [&](const std::vector<OutgoingTransfer>& transfers) {
        replay();
        for (const auto& tr : transfers) {
            auto& w = led.wallet(led.index_of(tr.recipient));
            for (const auto& v : tr.vpbs) judge(tr, v, w.accept(led.headers(), v, tr.txn, tr.txn_block));
        }
    };
    auto audit = [&] {
        std::uint64_t total = 0;
        for (std::size_t i = 0; i < led.size(); ++i) total += led.wallet(i).balance();
        for (std::size_t i = 0; i < led.size(); ++i) {
            for (const auto& cp : led.wallet(i).checkpoints().entries()) {
                auto& h = cp_seen[{i, cp.value.begin()}];
                h = std::max(h, cp.block_height);
            }
            for (const auto& [key, h] : cp_seen) {
                if (key.first != i) continue;
                auto now = led.wallet(i).checkpoints().height_for(Value(key.second, key.second));
                if (!now || *now < h) ++st.mismatches;
            }
        }
        return total;
    };

    const auto total_coins = led.genesis().total_coins();
    while (led.headers().height() < blocks) {
        if (rng() % 8 == 0) {
            // Attack: a holder spends a value, then re-spends it to someone else.
            const auto a = rng() % accounts;
            auto x = rng() % accounts, y = rng() % accounts;
            if (x == a) x = (x + 1) % accounts;
            if (y == a || y == x) y = (std::max(a, x) + 1) % accounts;
            if (y == a || y == x) y = (y + 1) % accounts;
            const Holding* pick = nullptr;
            for (const auto& h : led.wallet(a).holdings()) {
                if (!h.locked && can_transfer(h.vpb, led.addr(x)) && can_transfer(h.vpb, led.addr(y))) pick = &h;
            }
            if (pick != nullptr && y != a && y != x) {
                const auto v = pick->vpb.value;
                auto shadow = pick->vpb;
                auto spend = led.wallet(a).create_txn(led.addr(x), {v}, 0);
                auto first = led.mine();
                deliver_all(first);
                const auto b1 = led.headers().height();
                auto respend = ezchain::testing::signed_txn(led.key(a), led.addr(y), {v}, 1);
                const auto b2 = led.mine_with_foreign_batch(a, TxnBatch{{respend}});
                deliver_all(led.take_pending());
                auto forged = shadow;
                if (rng() % 2) append_unit(forged, b1, unit_of(led, a, b1));
                append_unit(forged, b2, unit_of(led, a, b2));
                forged = truncate_for(forged, led.addr(y));
                OutgoingTransfer tr{led.addr(y), respend, b2, {forged}};
                replay();
                judge(tr, forged, led.wallet(y).accept(led.headers(), forged, respend, b2));
                (void)spend;
                if (audit() != total_coins) ++st.mismatches;
                continue;
            }
        }
        const auto payers = 1 + rng() % accounts;
        for (std::size_t k = 0; k < payers; ++k) {
            const auto from = rng() % accounts;
            auto to = rng() % accounts;
            if (to == from) to = (to + 1) % accounts;
            const auto spendable = led.wallet(from).spendable_to(led.addr(to));
            if (spendable == 0) continue;
            const auto strategy = static_cast<SelectionStrategy>(rng() % 3);
            (void)led.wallet(from).pay(led.addr(to), 1 + rng() % spendable, strategy, k);
        }
        auto transfers = led.mine();
        std::uint64_t in_flight = 0;
        for (const auto& tr : transfers) {
            for (const auto& v : tr.vpbs) in_flight += v.value.amount();
        }
        std::uint64_t held = 0;
        for (std::size_t i = 0; i < led.size(); ++i) held += led.wallet(i).balance();
        if (held + in_flight != total_coins) ++st.mismatches;
        deliver_all(transfers);
        if (audit() != total_coins) ++st.mismatches;
    }
    return st;
}

}  // namespace

TEST(Oracle, RandomRunsAgreeWithReplayer) {
    std::size_t transfers = 0, rejected = 0;
    for (std::uint64_t seed = 1; seed <= 12; ++seed) {
        auto st = oracle_run(seed, seed % 3 == 0 ? cramped() : roomy(), 3 + seed % 4, 40);
        EXPECT_EQ(st.mismatches, 0u) << "seed " << seed;
        transfers += st.transfers;
        rejected += st.rejected;
    }
    EXPECT_GT(transfers, 200u);
    EXPECT_GT(rejected, 5u);
}

TEST(Vpb, WireSizeMatchesEncoding) {
    MiniLedger led(4, 100, cramped(), 3);
    std::mt19937_64 rng(5);
    for (int round = 0; round < 30; ++round) {
        const auto from = rng() % 4;
        const auto to = (from + 1 + rng() % 3) % 4;
        if (const auto s = led.wallet(from).spendable_to(led.addr(to)); s > 0) {
            (void)led.wallet(from).pay(led.addr(to), 1 + rng() % s, SelectionStrategy::Naive, round);
        }
        auto transfers = led.mine();
        for (const auto& tr : transfers) {
            EXPECT_EQ(wire_size(tr.txn), encoded_size(tr.txn));
            for (const auto& v : tr.vpbs) {
                EXPECT_EQ(wire_size(v), encoded_size(v));
                for (const auto& u : v.proof) EXPECT_EQ(wire_size(u), encoded_size(u));
            }
        }
        (void)led.deliver(transfers);
    }
}
