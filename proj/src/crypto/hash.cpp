// SPDX-License-Identifier: Apache-2.0
#include "ezchain/crypto/hash.hpp"

#include <sodium.h>

namespace ezchain::crypto {

namespace {

thread_local OpCounts g_ops;

}  // namespace

Digest hash(ByteSpan data) {
    ++g_ops.hashes;
    Digest out;
    crypto_hash_sha256(out.bytes.data(), data.data(), data.size());
    return out;
}

Digest hash_pair(const Digest& left, const Digest& right) {
    std::array<std::uint8_t, 64> buf;
    std::copy(left.bytes.begin(), left.bytes.end(), buf.begin());
    std::copy(right.bytes.begin(), right.bytes.end(), buf.begin() + 32);
    return hash(buf);
}

OpCounts op_counts() noexcept { return g_ops; }

void count_sig_verify() noexcept { ++g_ops.sig_verifies; }

}  // namespace ezchain::crypto
