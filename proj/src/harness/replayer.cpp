// SPDX-License-Identifier: Apache-2.0
#include "ezchain/harness/replayer.hpp"

#include <algorithm>
#include <stdexcept>

#include "ezchain/crypto/keys.hpp"

namespace ezchain::harness {

Replayer::Replayer(const GenesisAllocation& genesis) : total_(genesis.total_coins()) {
    for (const auto& e : genesis.entries()) segs_.emplace(e.value.begin(), Seg{e.value.end(), e.owner, 0});
}

void Replayer::split_at(std::uint64_t coin) {
    if (coin >= total_) return;
    auto it = segs_.upper_bound(coin);
    --it;
    if (it->first == coin) return;
    Seg right = it->second;
    it->second.end = coin - 1;
    segs_.emplace(coin, right);
}

std::optional<Address> Replayer::owner_of(std::uint64_t coin) const {
    auto it = segs_.upper_bound(coin);
    if (it == segs_.begin()) throw std::out_of_range("coin");
    --it;
    return it->second.owner;
}

void Replayer::apply_block(std::uint64_t index, const std::vector<TxnBatch>& batches) {
    if (index != height_ + 1) throw std::logic_error("replayer blocks out of order");
    struct Move {
        std::uint64_t begin, end;
        std::optional<Address> to;
    };
    std::vector<Move> moves;
    for (const auto& batch : batches) {
        const bool signed_ok = std::all_of(batch.txns.begin(), batch.txns.end(), [](const Transaction& t) {
            return crypto::verify(t.sender, t.signing_bytes(), t.sig);
        });
        for (std::size_t ti = 0; ti < batch.txns.size(); ++ti) {
            const auto& t = batch.txns[ti];
            for (const auto& v : t.values) {
                if (!signed_ok) {
                    decisions_[Key{canonical_encode(t), v.begin(), v.end(), index}] = false;
                    continue;
                }
                split_at(v.begin());
                split_at(v.end() + 1);
                bool all_ok = true;
                for (auto it = segs_.find(v.begin()); it != segs_.end() && it->first <= v.end(); ++it) {
                    const Seg& s = it->second;
                    const bool owned = s.owner && *s.owner == t.sender && s.acquired < index;
                    bool contested = false;
                    for (std::size_t oj = 0; oj < batch.txns.size() && !contested; ++oj) {
                        if (oj == ti) continue;
                        for (const auto& w : batch.txns[oj].values) {
                            if (w.begin() <= s.end && it->first <= w.end()) contested = true;
                        }
                    }
                    if (!owned || contested) all_ok = false;
                    if (owned) {
                        moves.push_back(Move{it->first, s.end, contested ? std::nullopt : std::optional<Address>(t.recipient)});
                    }
                }
                decisions_[Key{canonical_encode(t), v.begin(), v.end(), index}] = all_ok;
            }
        }
    }
    for (const auto& m : moves) {
        split_at(m.begin);
        split_at(m.end + 1);
        for (auto it = segs_.find(m.begin); it != segs_.end() && it->first <= m.end; ++it) {
            it->second.owner = m.to;
            it->second.acquired = index;
        }
    }
    height_ = index;
}

std::optional<bool> Replayer::legit(const Transaction& txn, const Value& v, std::uint64_t index) const {
    auto it = decisions_.find(Key{canonical_encode(txn), v.begin(), v.end(), index});
    if (it == decisions_.end()) return std::nullopt;
    return it->second;
}

}  // namespace ezchain::harness
