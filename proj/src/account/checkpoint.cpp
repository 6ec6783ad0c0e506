// SPDX-License-Identifier: Apache-2.0
#include "ezchain/account/checkpoint.hpp"

#include <algorithm>

namespace ezchain::account {

void CheckpointStore::record(const CheckPoint& cp) {
    for (const auto& e : entries_) {
        if (e.trusted_owner == cp.trusted_owner && e.value.contains(cp.value) && e.block_height >= cp.block_height) {
            return;
        }
    }
    std::erase_if(entries_, [&](const CheckPoint& e) {
        return e.trusted_owner == cp.trusted_owner && cp.value.contains(e.value) && e.block_height < cp.block_height;
    });
    entries_.push_back(cp);
}

bool CheckpointStore::has(const Value& value, std::uint64_t height, const Address& owner) const {
    return std::any_of(entries_.begin(), entries_.end(), [&](const CheckPoint& e) {
        return e.block_height == height && e.trusted_owner == owner && e.value.contains(value);
    });
}

std::optional<std::uint64_t> CheckpointStore::height_for(const Value& value) const {
    std::optional<std::uint64_t> best;
    for (const auto& e : entries_) {
        if (e.value.contains(value) && (!best || e.block_height > *best)) best = e.block_height;
    }
    return best;
}

}  // namespace ezchain::account
