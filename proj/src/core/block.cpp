// SPDX-License-Identifier: Apache-2.0
#include "ezchain/core/block.hpp"

#include <bit>

#include "ezchain/crypto/hash.hpp"

namespace ezchain {

namespace {

void encode_header_fields(Encoder& enc, const Block& b, bool with_sig) {
    enc.fixed(b.mtree_root);
    encode(enc, b.bloom);
    enc.fixed(b.pre_hash);
    enc.u64(b.time);
    enc.fixed(b.miner);
    if (with_sig) enc.fixed(b.miner_sig);
    enc.u64(b.nonce);
    enc.u64(b.index);
}

}  // namespace

Bytes Block::header_bytes() const {
    Encoder enc;
    encode_header_fields(enc, *this, false);
    return std::move(enc).take();
}

void encode(Encoder& enc, const Block& b) { encode_header_fields(enc, b, true); }

Digest block_hash(const Block& b) { return crypto::hash(canonical_encode(b)); }

bool nonce_meets_difficulty(const Block& b, std::uint32_t difficulty_bits) {
    if (difficulty_bits == 0) return true;
    Encoder enc;
    enc.fixed(b.pre_hash);
    enc.fixed(b.miner);
    enc.u64(b.nonce);
    auto d = crypto::hash(enc.data());
    std::uint32_t zeros = 0;
    for (auto byte : d.bytes) {
        if (byte == 0) {
            zeros += 8;
            continue;
        }
        zeros += static_cast<std::uint32_t>(std::countl_zero(byte));
        break;
    }
    return zeros >= difficulty_bits;
}

}  // namespace ezchain
