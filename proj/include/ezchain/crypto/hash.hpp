// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include "ezchain/core/bytes.hpp"

namespace ezchain::crypto {

/// SHA-256.
Digest hash(ByteSpan data);

/// hash(a || b), the Merkle interior-node rule.
Digest hash_pair(const Digest& left, const Digest& right);

/// Per-thread count of primitive operations, the deterministic cost proxy
/// used for block validation metrics.
struct OpCounts {
    std::uint64_t hashes = 0;
    std::uint64_t sig_verifies = 0;

    friend OpCounts operator-(const OpCounts& a, const OpCounts& b) {
        return {a.hashes - b.hashes, a.sig_verifies - b.sig_verifies};
    }
    friend bool operator==(const OpCounts&, const OpCounts&) = default;
};

OpCounts op_counts() noexcept;
void count_sig_verify() noexcept;

}  // namespace ezchain::crypto
