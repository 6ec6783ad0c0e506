// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <queue>
#include <random>
#include <unordered_map>
#include <vector>

#include "ezchain/core/bytes.hpp"

namespace ezchain::simnet {

enum class NodeClass : std::uint8_t { Consensus, Account };

struct NetParams {
    std::uint64_t bandwidth_bps = 1'000'000;
    Tick latency_cc_max = 1000;
    Tick latency_ca = 1500;
    Tick latency_aa = 1500;
};

/// Point-to-point link model. Each directed link transmits one message at a
/// time at the configured bandwidth, then adds the class queuing latency;
/// deliveries on a link never overtake each other.
class LinkModel {
public:
    LinkModel(std::vector<NodeClass> classes, NetParams params, std::uint64_t seed);

    /// floor(bytes * 8 * 1000 / bandwidth)
    [[nodiscard]] Tick transmission_ticks(std::uint64_t bytes) const noexcept;
    /// Queuing latency for one message; consensus-consensus draws from the RNG.
    Tick latency(std::size_t from, std::size_t to);
    /// Reserves the link and returns the delivery tick (>= now).
    Tick schedule(Tick now, std::size_t from, std::size_t to, std::uint64_t bytes);

    [[nodiscard]] NodeClass node_class(std::size_t i) const { return classes_.at(i); }
    [[nodiscard]] std::size_t size() const noexcept { return classes_.size(); }
    [[nodiscard]] std::uint64_t bytes_sent() const noexcept { return bytes_sent_; }
    [[nodiscard]] std::uint64_t messages_sent() const noexcept { return messages_sent_; }

private:
    struct Link {
        Tick free_at = 0;
        Tick last_delivery = 0;
    };
    std::vector<NodeClass> classes_;
    NetParams params_;
    std::mt19937_64 rng_;
    std::unordered_map<std::uint64_t, Link> links_;
    std::uint64_t bytes_sent_ = 0;
    std::uint64_t messages_sent_ = 0;
};

/// Min-queue ordered by (tick, insertion sequence).
template <typename T>
class EventQueue {
public:
    void push(Tick tick, T item) { heap_.push(Entry{tick, seq_++, std::move(item)}); }
    [[nodiscard]] bool empty() const noexcept { return heap_.empty(); }
    [[nodiscard]] std::size_t size() const noexcept { return heap_.size(); }
    [[nodiscard]] Tick next_tick() const { return heap_.top().tick; }
    std::pair<Tick, T> pop() {
        Entry e = std::move(const_cast<Entry&>(heap_.top()));
        heap_.pop();
        return {e.tick, std::move(e.item)};
    }

private:
    struct Entry {
        Tick tick;
        std::uint64_t seq;
        T item;
        bool operator>(const Entry& o) const noexcept { return tick != o.tick ? tick > o.tick : seq > o.seq; }
    };
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap_;
    std::uint64_t seq_ = 0;
};

}  // namespace ezchain::simnet
