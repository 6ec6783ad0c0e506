// SPDX-License-Identifier: Apache-2.0
#include "ezchain/core/transaction.hpp"

namespace ezchain {

namespace {

void encode_unsigned(Encoder& enc, const Transaction& t) {
    enc.fixed(t.sender);
    enc.fixed(t.recipient);
    enc.u32(static_cast<std::uint32_t>(t.values.size()));
    for (const auto& v : t.values) encode(enc, v);
    enc.u64(t.time);
}

}  // namespace

Bytes Transaction::signing_bytes() const {
    Encoder enc;
    encode_unsigned(enc, *this);
    return std::move(enc).take();
}

void encode(Encoder& enc, const Transaction& t) {
    encode_unsigned(enc, t);
    enc.fixed(t.sig);
}

void encode(Encoder& enc, const TxnBatch& b) {
    enc.u32(static_cast<std::uint32_t>(b.txns.size()));
    for (const auto& t : b.txns) encode(enc, t);
}

void encode(Encoder& enc, const AccTxn& a) {
    enc.fixed(a.sender);
    enc.fixed(a.txns_hash);
    enc.fixed(a.sig);
}

std::uint64_t wire_size(const Transaction& t) noexcept { return 32 + 32 + 4 + 16 * t.values.size() + 8 + 64; }

std::uint64_t wire_size(const TxnBatch& b) noexcept {
    std::uint64_t n = 4;
    for (const auto& t : b.txns) n += wire_size(t);
    return n;
}

bool batch_well_formed(const TxnBatch& batch) {
    if (batch.txns.empty()) return false;
    std::vector<Value> all;
    for (const auto& t : batch.txns) {
        if (t.sender != batch.txns.front().sender) return false;
        if (t.values.empty()) return false;
        all.insert(all.end(), t.values.begin(), t.values.end());
    }
    return pairwise_disjoint(all);
}

}  // namespace ezchain
