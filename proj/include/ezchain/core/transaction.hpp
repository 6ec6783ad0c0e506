// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <vector>

#include "ezchain/core/bytes.hpp"
#include "ezchain/core/encoding.hpp"
#include "ezchain/core/value.hpp"

namespace ezchain {

struct Transaction {
    Address sender;
    Address recipient;
    std::vector<Value> values;
    Tick time = 0;
    Signature sig;

    /// Bytes covered by `sig`: sender, recipient, values, time.
    [[nodiscard]] Bytes signing_bytes() const;

    friend bool operator==(const Transaction&, const Transaction&) = default;
};

/// All transactions one sender packages for one block; hashed into a
/// single Merkle leaf.
struct TxnBatch {
    std::vector<Transaction> txns;

    friend bool operator==(const TxnBatch&, const TxnBatch&) = default;
};

using TxnBatchPtr = std::shared_ptr<const TxnBatch>;

/// A sender's pool submission: (Sender, HASH(Txns), SigInfo).
struct AccTxn {
    Address sender;
    Digest txns_hash;
    Signature sig;

    friend bool operator==(const AccTxn&, const AccTxn&) = default;
};

void encode(Encoder& enc, const Transaction& t);
void encode(Encoder& enc, const TxnBatch& b);
void encode(Encoder& enc, const AccTxn& a);

/// Well-formedness of a batch: non-empty txns with non-empty, pairwise
/// disjoint values, one common sender, and no value spent twice in the batch.
/// Encoded sizes, computed without serializing.
std::uint64_t wire_size(const Transaction& t) noexcept;
std::uint64_t wire_size(const TxnBatch& b) noexcept;

bool batch_well_formed(const TxnBatch& batch);

}  // namespace ezchain
