// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

namespace ezchain::simnet {

/// Undirected neighbor graph; adjacency lists are sorted.
struct Topology {
    std::vector<std::vector<std::size_t>> adj;

    [[nodiscard]] std::size_t size() const noexcept { return adj.size(); }
    [[nodiscard]] std::size_t max_degree() const noexcept;
    [[nodiscard]] bool adjacent(std::size_t a, std::size_t b) const;
    /// Connectivity of the subgraph induced by nodes with member[i] set.
    [[nodiscard]] bool connected(const std::vector<bool>& member) const;
    /// Longest shortest path within the induced subgraph (hops); requires it connected.
    [[nodiscard]] std::size_t diameter(const std::vector<bool>& member) const;
    /// Hop distances from `src` within the induced subgraph; unreachable = SIZE_MAX.
    [[nodiscard]] std::vector<std::size_t> hops_from(std::size_t src, const std::vector<bool>& member) const;
};

/// Random graph with every degree <= max_neighbors, re-sampled until the
/// honest nodes induce a connected subgraph. Complete when n <= max_neighbors + 1.
/// Deterministic in `seed`. Throws InfeasibleTopology when the degree bound
/// cannot connect the honest nodes or sampling keeps failing.
Topology build_topology(std::size_t n, const std::vector<bool>& honest, std::size_t max_neighbors,
                        std::uint64_t seed);

}  // namespace ezchain::simnet
