// SPDX-License-Identifier: Apache-2.0
#include "ezchain/consensus/pool.hpp"

#include "ezchain/crypto/keys.hpp"

namespace ezchain::consensus {

SubmitResult TxnPool::submit(const AccTxn& acctxn) {
    if (!crypto::verify(acctxn.sender, acctxn.txns_hash.span(), acctxn.sig)) return SubmitResult::BadSignature;
    if (pending_.count(acctxn.sender) != 0) return SubmitResult::DuplicateSender;
    pending_.emplace(acctxn.sender, acctxn);
    return SubmitResult::Accepted;
}

void TxnPool::remove_included(const SigInfos& included) {
    for (const auto& a : included) {
        auto it = pending_.find(a.sender);
        if (it != pending_.end() && it->second == a) pending_.erase(it);
    }
}

SigInfos TxnPool::entries() const {
    SigInfos out;
    out.reserve(pending_.size());
    for (const auto& [_, a] : pending_) out.push_back(a);
    return out;
}

}  // namespace ezchain::consensus
