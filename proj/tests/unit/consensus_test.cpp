// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <map>
#include <random>

#include "ezchain/consensus/chain.hpp"
#include "ezchain/consensus/challenge.hpp"
#include "ezchain/consensus/election.hpp"
#include "ezchain/consensus/package.hpp"
#include "ezchain/consensus/pool.hpp"
#include "ezchain/consensus/validation.hpp"
#include "ezchain/core/error.hpp"
#include "ezchain/crypto/hash.hpp"
#include "ezchain/crypto/merkle.hpp"
#include "fixtures.hpp"

using namespace ezchain;
using namespace ezchain::consensus;
using ezchain::testing::make_acctxn;
using ezchain::testing::random_digest;
using ezchain::testing::test_key;

namespace {

ConsensusParams small_params() {
    ConsensusParams p;
    p.bloom = crypto::BloomParams{1u << 14, 7};
    p.retention_window = 5;
    return p;
}

std::shared_ptr<const GenesisAllocation> two_owner_genesis() {
    return std::make_shared<GenesisAllocation>(std::vector<GenesisEntry>{
        {test_key(100).address(), Value(0, 49)}, {test_key(101).address(), Value(50, 99)}});
}

TxnPool random_pool(std::mt19937_64& rng, std::size_t n, std::uint64_t key_base = 0) {
    TxnPool pool;
    for (std::size_t i = 0; i < n; ++i) {
        EXPECT_EQ(pool.submit(make_acctxn(test_key(key_base + i), random_digest(rng))), SubmitResult::Accepted);
    }
    return pool;
}

struct Fixture {
    ConsensusParams params = small_params();
    ChainState chain{two_owner_genesis(), params};
    const crypto::KeyPair& miner = test_key(999);
};

}  // namespace

TEST(Pool, SubmitOutcomes) {
    TxnPool pool;
    std::mt19937_64 rng(1);
    auto a = make_acctxn(test_key(1), random_digest(rng));
    EXPECT_EQ(pool.submit(a), SubmitResult::Accepted);
    auto again = make_acctxn(test_key(1), random_digest(rng));
    EXPECT_EQ(pool.submit(again), SubmitResult::DuplicateSender);
    auto bad = make_acctxn(test_key(2), random_digest(rng));
    bad.sig.bytes[0] ^= 1;
    EXPECT_EQ(pool.submit(bad), SubmitResult::BadSignature);
    EXPECT_EQ(pool.size(), 1u);
    EXPECT_EQ(pool.entries().front(), a);
}

TEST(Package, SingleEntryRootIsItsHash) {
    Fixture f;
    std::mt19937_64 rng(2);
    auto pool = random_pool(rng, 1);
    auto pb = package_block(pool, f.chain.headers().tip(), f.chain.headers().hash_at(0), f.miner, 10, 0, f.params);
    EXPECT_EQ(pb.block.mtree_root, pool.entries()[0].txns_hash);
    EXPECT_EQ(pb.block.index, 1u);
}

TEST(Package, FourEntriesMatchOracleAndBloom) {
    Fixture f;
    std::mt19937_64 rng(3);
    auto pool = random_pool(rng, 4);
    auto pb = package_block(pool, f.chain.headers().tip(), f.chain.headers().hash_at(0), f.miner, 10, 0, f.params);
    std::map<Address, Digest> by_sender;
    for (const auto& a : pool.entries()) by_sender[a.sender] = a.txns_hash;
    std::vector<Digest> leaves;
    for (const auto& [_, d] : by_sender) leaves.push_back(d);
    auto l01 = crypto::hash_pair(leaves[0], leaves[1]);
    auto l23 = crypto::hash_pair(leaves[2], leaves[3]);
    EXPECT_EQ(pb.block.mtree_root, crypto::hash_pair(l01, l23));
    for (const auto& [s, _] : by_sender) EXPECT_TRUE(pb.block.bloom.query(s));
    ASSERT_EQ(pb.siginfos.size(), 4u);
    for (std::size_t i = 0; i + 1 < pb.siginfos.size(); ++i) EXPECT_LT(pb.siginfos[i].sender, pb.siginfos[i + 1].sender);
}

TEST(Package, EmptyPoolGivesEmptyBlock) {
    Fixture f;
    TxnPool pool;
    auto pb = package_block(pool, f.chain.headers().tip(), f.chain.headers().hash_at(0), f.miner, 10, 0, f.params);
    EXPECT_EQ(pb.block.mtree_root, empty_mtree_root());
    EXPECT_EQ(pb.block.bloom.popcount(), 0u);
    EXPECT_TRUE(validate_block(pb.block, pb.siginfos, f.chain.headers().tip(), f.chain.headers().hash_at(0), f.params).valid());
}

TEST(Package, BlockSizeIndependentOfPoolSize) {
    Fixture f;
    std::mt19937_64 rng(4);
    std::size_t size = 0;
    for (std::size_t n : {1u, 100u, 1000u}) {
        auto pool = random_pool(rng, n);
        auto pb = package_block(pool, f.chain.headers().tip(), f.chain.headers().hash_at(0), f.miner, 10, 0, f.params);
        auto s = encoded_size(pb.block);
        if (size == 0) size = s;
        EXPECT_EQ(s, size);
    }
}

TEST(Package, DifficultyIsMet) {
    Fixture f;
    f.params.difficulty_bits = 6;
    std::mt19937_64 rng(5);
    auto pool = random_pool(rng, 3);
    auto pb = package_block(pool, f.chain.headers().tip(), f.chain.headers().hash_at(0), f.miner, 10, 0, f.params);
    EXPECT_TRUE(nonce_meets_difficulty(pb.block, 6));
    EXPECT_TRUE(validate_block(pb.block, pb.siginfos, f.chain.headers().tip(), f.chain.headers().hash_at(0), f.params).valid());
}

TEST(Validate, RoundTripOverRandomPools) {
    std::mt19937_64 rng(6);
    Fixture f;
    for (int trial = 0; trial < 30; ++trial) {
        auto pool = random_pool(rng, 1 + rng() % 40, rng() % 1000);
        const auto& tip = f.chain.headers().tip();
        auto pb = package_block(pool, tip, f.chain.headers().hash_at(f.chain.height()), f.miner, tip.time + rng() % 5, rng(), f.params);
        auto v = validate_block(pb.block, pb.siginfos, tip, f.chain.headers().hash_at(f.chain.height()), f.params);
        ASSERT_TRUE(v.valid()) << to_string(v.result);
        f.chain.append(std::make_shared<Block>(pb.block), pb.siginfos);
    }
    EXPECT_EQ(f.chain.height(), 30u);
}

TEST(Validate, EverySingleFieldMutationIsRejected) {
    Fixture f;
    std::mt19937_64 rng(7);
    auto pool = random_pool(rng, 6);
    const auto& parent = f.chain.headers().tip();
    const auto& ph = f.chain.headers().hash_at(0);
    auto pb = package_block(pool, parent, ph, f.miner, 10, 0, f.params);
    ASSERT_TRUE(validate_block(pb.block, pb.siginfos, parent, ph, f.params).valid());

    auto check = [&](const Block& b, const SigInfos& s, BlockCheck expected) {
        auto v = validate_block(b, s, parent, ph, f.params);
        EXPECT_EQ(v.result, expected) << to_string(v.result);
    };

    {
        auto s = pb.siginfos;
        s[2].sig.bytes[5] ^= 1;
        check(pb.block, s, BlockCheck::BadSignature);
    }
    {
        auto b = pb.block;
        for (std::uint64_t i = 0;; ++i) {
            if (!b.bloom.test_bit(i)) {
                b.bloom.flip_bit(i);
                break;
            }
        }
        check(b, pb.siginfos, BlockCheck::BloomMismatch);
    }
    {
        auto s = pb.siginfos;
        for (std::uint64_t k = 0; k < 6; ++k) {
            if (test_key(k).address() == s[3].sender) s[3] = make_acctxn(test_key(k), random_digest(rng));
        }
        ASSERT_NE(s[3].txns_hash, pb.siginfos[3].txns_hash);
        check(pb.block, s, BlockCheck::MtreeMismatch);
    }
    {
        // Duplicate sender packaged by a dishonest miner: bloom and root are consistent.
        auto entries = pb.siginfos;
        entries.push_back(make_acctxn(test_key(0), random_digest(rng)));
        auto dup = package_entries(entries, parent, ph, f.miner, 10, 0, f.params);
        check(dup.block, dup.siginfos, BlockCheck::DuplicateSender);
    }
    {
        auto b = pb.block;
        b.pre_hash.bytes[0] ^= 1;
        resign_block(b, f.miner);
        check(b, pb.siginfos, BlockCheck::BadPreHash);
    }
    {
        auto b = pb.block;
        b.index = 7;
        resign_block(b, f.miner);
        check(b, pb.siginfos, BlockCheck::BadIndex);
    }
    {
        auto b = pb.block;
        b.time = 11;
        check(b, pb.siginfos, BlockCheck::BadMinerSig);
    }
}

TEST(Validate, OpCountIndependentOfTransactionCount) {
    Fixture f;
    std::mt19937_64 rng(8);
    std::vector<crypto::OpCounts> seen;
    for (int txns : {10, 1000, 5000}) {
        TxnPool pool;
        for (std::uint64_t s = 0; s < 10; ++s) {
            TxnBatch batch;
            for (int i = 0; i < txns / 10; ++i) {
                auto v = static_cast<std::uint64_t>(i);
                batch.txns.push_back(Transaction{test_key(s).address(), test_key(s + 1).address(), {Value(v, v)}, 0, {}});
            }
            pool.submit(make_acctxn(test_key(s), crypto::hash(canonical_encode(batch))));
        }
        auto pb = package_block(pool, f.chain.headers().tip(), f.chain.headers().hash_at(0), f.miner, 1, 0, f.params);
        auto v = validate_block(pb.block, pb.siginfos, f.chain.headers().tip(), f.chain.headers().hash_at(0), f.params);
        ASSERT_TRUE(v.valid());
        seen.push_back(v.ops);
    }
    EXPECT_EQ(seen[0], seen[1]);
    EXPECT_EQ(seen[1], seen[2]);
    EXPECT_EQ(seen[0].sig_verifies, 11u);
}

TEST(Chain, RejectsNonExtendingBlock) {
    Fixture f;
    std::mt19937_64 rng(9);
    auto pool = random_pool(rng, 2);
    auto pb = package_block(pool, f.chain.headers().tip(), f.chain.headers().hash_at(0), f.miner, 10, 0, f.params);
    auto wrong = pb.block;
    wrong.pre_hash.bytes[1] ^= 1;
    try {
        f.chain.append(std::make_shared<Block>(wrong), pb.siginfos);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ChainMismatch);
    }
    f.chain.append(std::make_shared<Block>(pb.block), pb.siginfos);
    EXPECT_EQ(f.chain.headers().hash_at(1), block_hash(pb.block));
}

TEST(Chain, ServesProofsAndUnknownSender) {
    Fixture f;
    std::mt19937_64 rng(10);
    auto pool = random_pool(rng, 5);
    auto pb = package_block(pool, f.chain.headers().tip(), f.chain.headers().hash_at(0), f.miner, 10, 0, f.params);
    f.chain.append(std::make_shared<Block>(pb.block), pb.siginfos);
    for (const auto& a : pb.siginfos) {
        auto p = f.chain.serve_mtree_proof(1, a.sender);
        EXPECT_EQ(p.leaf, a.txns_hash);
        EXPECT_TRUE(crypto::merkle_verify(pb.block.mtree_root, p));
    }
    try {
        (void)f.chain.serve_mtree_proof(1, test_key(77).address());
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::UnknownSender);
    }
}

TEST(Chain, GenesisProofsVerify) {
    Fixture f;
    const auto& g = f.chain.headers().genesis();
    for (const auto& owner : g.owners()) {
        auto p = f.chain.serve_mtree_proof(0, owner);
        EXPECT_EQ(p.leaf, crypto::hash(genesis_leaf_bytes(owner, g.values_of(owner))));
        EXPECT_TRUE(crypto::merkle_verify(f.chain.headers().at(0).mtree_root, p));
        EXPECT_TRUE(f.chain.headers().at(0).bloom.query(owner));
    }
}

TEST(Chain, RetentionWindowPrunesOldBlocks) {
    Fixture f;
    std::mt19937_64 rng(11);
    for (int i = 0; i < 8; ++i) {
        auto pool = random_pool(rng, 3);
        auto h = f.chain.height();
        auto pb = package_block(pool, f.chain.headers().tip(), f.chain.headers().hash_at(h), f.miner, 10, 0, f.params);
        f.chain.append(std::make_shared<Block>(pb.block), pb.siginfos);
    }
    EXPECT_TRUE(f.chain.retained(0));
    EXPECT_FALSE(f.chain.retained(3));
    EXPECT_TRUE(f.chain.retained(4));
    EXPECT_TRUE(f.chain.retained(8));
    try {
        (void)f.chain.respond_challenge(Challenge{2, test_key(1).address(), ChallengeKind::Bloom});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::BlockPruned);
    }
    try {
        (void)f.chain.serve_mtree_proof(2, test_key(1).address());
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::BlockPruned);
    }
}

TEST(Challenge, BloomResponseRebuildsAndExposesFalsePositive) {
    Fixture f;
    f.params.bloom = crypto::BloomParams{64, 2};
    ChainState chain(two_owner_genesis(), f.params);
    std::mt19937_64 rng(12);
    auto pool = random_pool(rng, 12);
    auto pb = package_block(pool, chain.headers().tip(), chain.headers().hash_at(0), f.miner, 10, 0, f.params);
    chain.append(std::make_shared<Block>(pb.block), pb.siginfos);

    // Find an outsider the tiny filter reports anyway.
    std::optional<Address> outsider;
    for (std::uint64_t k = 500; k < 2000 && !outsider; ++k) {
        if (!pool.contains(test_key(k).address()) && pb.block.bloom.query(test_key(k).address())) outsider = test_key(k).address();
    }
    ASSERT_TRUE(outsider.has_value());
    auto resp = chain.respond_challenge(Challenge{1, *outsider, ChallengeKind::Bloom});
    auto bytes = canonical_encode(resp);
    Decoder dec(bytes);
    auto back = decode_challenge_response(dec);
    dec.expect_done();
    auto adj = adjudicate_bloom(pb.block, back, *outsider);
    EXPECT_TRUE(adj.reconstructs);
    EXPECT_FALSE(adj.account_listed);
    EXPECT_TRUE(adj.false_positive);

    auto member = adjudicate_bloom(pb.block, back, pb.siginfos[0].sender);
    EXPECT_TRUE(member.account_listed);
    EXPECT_FALSE(member.false_positive);

    back.elements.pop_back();
    EXPECT_FALSE(adjudicate_bloom(pb.block, back, *outsider).reconstructs);
}

TEST(Challenge, MtreeResponseRebuildsRoot) {
    Fixture f;
    std::mt19937_64 rng(13);
    auto pool = random_pool(rng, 7);
    auto pb = package_block(pool, f.chain.headers().tip(), f.chain.headers().hash_at(0), f.miner, 10, 0, f.params);
    f.chain.append(std::make_shared<Block>(pb.block), pb.siginfos);
    auto c = Challenge{1, pb.siginfos[2].sender, ChallengeKind::Mtree};
    auto cb = canonical_encode(c);
    EXPECT_EQ(cb.size(), 8u + 32u + 1u);
    Decoder cd(cb);
    auto resp = f.chain.respond_challenge(decode_challenge(cd));
    auto adj = adjudicate_mtree(pb.block, resp, pb.siginfos[2].sender);
    EXPECT_TRUE(adj.reconstructs);
    ASSERT_TRUE(adj.account_entry.has_value());
    EXPECT_EQ(adj.account_entry->txns_hash, pb.siginfos[2].txns_hash);
    resp.siginfos[0].txns_hash.bytes[0] ^= 1;
    EXPECT_FALSE(adjudicate_mtree(pb.block, resp, pb.siginfos[2].sender).reconstructs);
}

TEST(Election, SingleCandidateAndDeterminism) {
    SeededLottery lot(42);
    for (std::uint64_t r = 0; r < 100; ++r) EXPECT_EQ(lot.elect(1, r), 0u);
    SeededLottery again(42);
    for (std::uint64_t r = 0; r < 1000; ++r) ASSERT_EQ(lot.elect(17, r), again.elect(17, r));
}

TEST(Election, RoughlyUniformOverCandidates) {
    SeededLottery lot(7);
    std::vector<int> wins(100, 0);
    for (std::uint64_t r = 0; r < 10000; ++r) ++wins[lot.elect(100, r)];
    double chi2 = 0;
    for (int w : wins) {
        EXPECT_GE(w, 70);
        EXPECT_LE(w, 130);
        chi2 += (w - 100.0) * (w - 100.0) / 100.0;
    }
    // 99 degrees of freedom; 99.9th percentile is about 148.
    EXPECT_LT(chi2, 148.0);
}
