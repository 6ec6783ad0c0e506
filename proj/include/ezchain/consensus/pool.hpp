// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <map>

#include "ezchain/consensus/params.hpp"

namespace ezchain::consensus {

enum class SubmitResult { Accepted, DuplicateSender, BadSignature };

/// Pending AccTxns keyed by sender; at most one per sender.
class TxnPool {
public:
    /// The pool is left unchanged on rejection.
    SubmitResult submit(const AccTxn& acctxn);

    /// Drops every entry that appears (same sender and hash) in `included`.
    void remove_included(const SigInfos& included);
    void erase(const Address& sender) { pending_.erase(sender); }

    [[nodiscard]] bool contains(const Address& sender) const { return pending_.count(sender) != 0; }
    [[nodiscard]] std::size_t size() const noexcept { return pending_.size(); }
    [[nodiscard]] bool empty() const noexcept { return pending_.empty(); }

    /// Entries ordered by sender address, the Merkle leaf order.
    [[nodiscard]] SigInfos entries() const;

private:
    std::map<Address, AccTxn> pending_;
};

inline SubmitResult submit_acctxn(TxnPool& pool, const AccTxn& a) { return pool.submit(a); }

}  // namespace ezchain::consensus
