// SPDX-License-Identifier: Apache-2.0
#include "ezchain/consensus/election.hpp"

#include <random>

namespace ezchain::consensus {

std::size_t SeededLottery::elect(std::size_t candidate_count, std::uint64_t round) const {
    if (candidate_count <= 1) return 0;
    std::seed_seq seq{static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32),
                      static_cast<std::uint32_t>(round), static_cast<std::uint32_t>(round >> 32), 0x6c6f74u};
    std::mt19937_64 rng(seq);
    const std::uint64_t n = candidate_count;
    const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % n);
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return static_cast<std::size_t>(x % n);
}

}  // namespace ezchain::consensus
