// SPDX-License-Identifier: Apache-2.0
#include "ezchain/simnet/network.hpp"

#include <algorithm>

namespace ezchain::simnet {

LinkModel::LinkModel(std::vector<NodeClass> classes, NetParams params, std::uint64_t seed)
    : classes_(std::move(classes)), params_(params), rng_(seed) {}

Tick LinkModel::transmission_ticks(std::uint64_t bytes) const noexcept {
    return bytes * 8 * 1000 / params_.bandwidth_bps;
}

Tick LinkModel::latency(std::size_t from, std::size_t to) {
    const auto a = classes_.at(from);
    const auto b = classes_.at(to);
    if (a == NodeClass::Consensus && b == NodeClass::Consensus) {
        return std::uniform_int_distribution<Tick>(0, params_.latency_cc_max)(rng_);
    }
    if (a == NodeClass::Account && b == NodeClass::Account) return params_.latency_aa;
    return params_.latency_ca;
}

Tick LinkModel::schedule(Tick now, std::size_t from, std::size_t to, std::uint64_t bytes) {
    auto& link = links_[(static_cast<std::uint64_t>(from) << 32) | to];
    const Tick start = std::max(now, link.free_at);
    link.free_at = start + transmission_ticks(bytes);
    const Tick deliver = std::max(link.free_at + latency(from, to), link.last_delivery);
    link.last_delivery = deliver;
    bytes_sent_ += bytes;
    ++messages_sent_;
    return deliver;
}

}  // namespace ezchain::simnet
