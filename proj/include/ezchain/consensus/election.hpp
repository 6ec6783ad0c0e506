// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>

namespace ezchain::consensus {

/// Picks the round's block producer. Implementations must be deterministic
/// in (round, candidate_count) so simulations replay exactly.
class LeaderElection {
public:
    virtual ~LeaderElection() = default;
    /// Index into the candidate list; requires candidate_count >= 1.
    virtual std::size_t elect(std::size_t candidate_count, std::uint64_t round) const = 0;
};

/// Simulated PoW: every candidate is equally likely to find the block first.
/// The winner of a round depends only on (seed, round), not on call order.
class SeededLottery final : public LeaderElection {
public:
    explicit SeededLottery(std::uint64_t seed) : seed_(seed) {}
    std::size_t elect(std::size_t candidate_count, std::uint64_t round) const override;

private:
    std::uint64_t seed_;
};

}  // namespace ezchain::consensus
