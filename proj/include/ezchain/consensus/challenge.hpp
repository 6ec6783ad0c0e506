// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ezchain/consensus/params.hpp"
#include "ezchain/core/block.hpp"

namespace ezchain::consensus {

enum class ChallengeKind : std::uint8_t { Bloom = 0, Mtree = 1 };

/// An account asking the publishing miner to reveal what a block's Bloom
/// filter or Merkle tree was built from.
struct Challenge {
    std::uint64_t block_index = 0;
    Address account;
    ChallengeKind kind = ChallengeKind::Bloom;
};

/// Bloom kind: `elements` is the full sender set. Mtree kind: `siginfos` are
/// all leaf entries in leaf order.
struct ChallengeResponse {
    std::uint64_t block_index = 0;
    ChallengeKind kind = ChallengeKind::Bloom;
    std::vector<Address> elements;
    SigInfos siginfos;
};

/// Wire formats:
///   Challenge:         block_index u64 | account 32 | kind u8
///   ChallengeResponse: block_index u64 | kind u8 | count u32 | entries
///                      (Bloom: address 32; Mtree: AccTxn 128)
void encode(Encoder& enc, const Challenge& c);
void encode(Encoder& enc, const ChallengeResponse& r);
Challenge decode_challenge(Decoder& dec);
ChallengeResponse decode_challenge_response(Decoder& dec);

struct BloomAdjudication {
    bool reconstructs = false;    // rebuild(elements) == on-chain filter
    bool account_listed = false;  // account is in the element set
    bool false_positive = false;  // reconstructs, not listed, yet the filter reports it
};

BloomAdjudication adjudicate_bloom(const Block& block, const ChallengeResponse& r, const Address& account);

struct MtreeAdjudication {
    bool reconstructs = false;              // Merkle root over the revealed leaves matches
    std::optional<AccTxn> account_entry;    // the leaf attributed to the account, if any
};

MtreeAdjudication adjudicate_mtree(const Block& block, const ChallengeResponse& r, const Address& account);

}  // namespace ezchain::consensus
