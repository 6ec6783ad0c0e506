// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include "ezchain/core/bytes.hpp"
#include "ezchain/core/encoding.hpp"
#include "ezchain/crypto/bloom.hpp"

namespace ezchain {

/// Constant-size consensus unit. The block commits to transaction content only
/// through `mtree_root` and to its senders only through `bloom`.
struct Block {
    Digest mtree_root;
    crypto::BloomFilter bloom;
    Digest pre_hash;
    Tick time = 0;
    Address miner;
    Signature miner_sig;
    std::uint64_t nonce = 0;
    std::uint64_t index = 0;

    /// Every field except `miner_sig`, in encoding order; this is what the miner signs.
    [[nodiscard]] Bytes header_bytes() const;

    friend bool operator==(const Block&, const Block&) = default;
};

void encode(Encoder& enc, const Block& b);

/// SHA-256 of the canonical encoding.
Digest block_hash(const Block& b);

/// Leading zero bits of hash(pre_hash || miner || nonce) must be >= difficulty_bits.
bool nonce_meets_difficulty(const Block& b, std::uint32_t difficulty_bits);

}  // namespace ezchain
