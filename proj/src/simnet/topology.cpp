// SPDX-License-Identifier: Apache-2.0
#include "ezchain/simnet/topology.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <random>

#include "ezchain/core/error.hpp"

namespace ezchain::simnet {

std::size_t Topology::max_degree() const noexcept {
    std::size_t d = 0;
    for (const auto& a : adj) d = std::max(d, a.size());
    return d;
}

bool Topology::adjacent(std::size_t a, std::size_t b) const {
    return std::binary_search(adj.at(a).begin(), adj.at(a).end(), b);
}

std::vector<std::size_t> Topology::hops_from(std::size_t src, const std::vector<bool>& member) const {
    std::vector<std::size_t> dist(adj.size(), std::numeric_limits<std::size_t>::max());
    if (!member.at(src)) return dist;
    std::deque<std::size_t> q{src};
    dist[src] = 0;
    while (!q.empty()) {
        const auto u = q.front();
        q.pop_front();
        for (auto v : adj[u]) {
            if (!member[v] || dist[v] != std::numeric_limits<std::size_t>::max()) continue;
            dist[v] = dist[u] + 1;
            q.push_back(v);
        }
    }
    return dist;
}

bool Topology::connected(const std::vector<bool>& member) const {
    auto first = std::find(member.begin(), member.end(), true);
    if (first == member.end()) return true;
    auto dist = hops_from(static_cast<std::size_t>(first - member.begin()), member);
    for (std::size_t i = 0; i < adj.size(); ++i) {
        if (member[i] && dist[i] == std::numeric_limits<std::size_t>::max()) return false;
    }
    return true;
}

std::size_t Topology::diameter(const std::vector<bool>& member) const {
    std::size_t d = 0;
    for (std::size_t i = 0; i < adj.size(); ++i) {
        if (!member[i]) continue;
        const auto dist = hops_from(i, member);
        for (std::size_t j = 0; j < adj.size(); ++j) {
            if (member[j]) d = std::max(d, dist[j]);
        }
    }
    return d;
}

Topology build_topology(std::size_t n, const std::vector<bool>& honest, std::size_t max_neighbors,
                        std::uint64_t seed) {
    if (honest.size() != n) throw Error(ErrorCode::ConfigError, "honest mask size differs from node count");
    const auto honest_count = static_cast<std::size_t>(std::count(honest.begin(), honest.end(), true));
    const std::size_t d = std::min(max_neighbors, n == 0 ? 0 : n - 1);
    if (honest_count > 1 && (d == 0 || (d == 1 && honest_count > 2))) {
        throw Error(ErrorCode::InfeasibleTopology, "degree bound " + std::to_string(max_neighbors) +
                                                       " cannot connect " + std::to_string(honest_count) +
                                                       " honest nodes");
    }
    Topology t;
    if (n <= max_neighbors + 1) {
        t.adj.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (i != j) t.adj[i].push_back(j);
            }
        }
        return t;
    }

    std::mt19937_64 rng(seed);
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    pairs.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    }
    for (int attempt = 0; attempt < 64; ++attempt) {
        std::shuffle(pairs.begin(), pairs.end(), rng);
        t.adj.assign(n, {});
        for (const auto& [a, b] : pairs) {
            if (t.adj[a].size() < d && t.adj[b].size() < d) {
                t.adj[a].push_back(b);
                t.adj[b].push_back(a);
            }
        }
        for (auto& a : t.adj) std::sort(a.begin(), a.end());
        if (t.connected(honest)) return t;
    }
    throw Error(ErrorCode::InfeasibleTopology, "no connected honest subgraph after 64 samples");
}

}  // namespace ezchain::simnet
