// SPDX-License-Identifier: Apache-2.0
#include "ezchain/account/selection.hpp"

#include <algorithm>
#include <numeric>

#include "ezchain/core/error.hpp"

namespace ezchain::account {

std::string_view to_string(SelectionStrategy s) noexcept {
    switch (s) {
        case SelectionStrategy::Naive: return "naive";
        case SelectionStrategy::MinProofSize: return "min_proof_size";
        case SelectionStrategy::NoSplit: return "no_split";
    }
    return "unknown";
}

SelectionStrategy parse_selection(std::string_view name) {
    if (name == "naive") return SelectionStrategy::Naive;
    if (name == "min_proof_size") return SelectionStrategy::MinProofSize;
    if (name == "no_split") return SelectionStrategy::NoSplit;
    throw Error(ErrorCode::ConfigError, "unknown selection strategy '" + std::string(name) + "'");
}

namespace {

Selection take_in_order(const std::vector<Candidate>& c, const std::vector<std::size_t>& order, std::uint64_t target) {
    Selection s;
    std::uint64_t sum = 0;
    for (auto i : order) {
        s.chosen.push_back(i);
        sum += c[i].value.amount();
        if (sum >= target) break;
    }
    if (sum > target) s.split_amount = c[s.chosen.back()].value.amount() - (sum - target);
    return s;
}

Selection min_proof_size(const std::vector<Candidate>& c, std::uint64_t target) {
    std::optional<std::size_t> single;
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (c[i].value.amount() < target) continue;
        if (!single || c[i].proof_units < c[*single].proof_units ||
            (c[i].proof_units == c[*single].proof_units && c[i].value.amount() < c[*single].value.amount())) {
            single = i;
        }
    }
    if (single) {
        Selection s{{*single}, std::nullopt};
        if (c[*single].value.amount() > target) s.split_amount = target;
        return s;
    }
    std::vector<std::size_t> order(c.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return c[a].proof_units < c[b].proof_units; });
    return take_in_order(c, order, target);
}

/// Exact subset sum over candidate amounts; bounded so large targets fall back.
std::optional<std::vector<std::size_t>> exact_subset(const std::vector<Candidate>& c, std::uint64_t target) {
    constexpr std::uint64_t kMaxTarget = 1u << 20;
    if (target > kMaxTarget) return std::nullopt;
    const auto t = static_cast<std::size_t>(target);
    // reach[s] = index of the candidate that first reached sum s, or npos
    constexpr auto npos = static_cast<std::size_t>(-1);
    std::vector<std::size_t> reach(t + 1, npos);
    std::vector<std::size_t> from(t + 1, 0);
    reach[0] = c.size();
    for (std::size_t i = 0; i < c.size(); ++i) {
        const auto a = c[i].value.amount();
        if (a > target) continue;
        for (std::size_t s = t; s >= a; --s) {
            if (reach[s] == npos && reach[s - a] != npos && reach[s - a] != i) {
                reach[s] = i;
                from[s] = s - a;
            }
            if (s == a) break;
        }
    }
    if (reach[t] == npos) return std::nullopt;
    std::vector<std::size_t> out;
    for (std::size_t s = t; s != 0; s = from[s]) out.push_back(reach[s]);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

Selection select_values(const std::vector<Candidate>& candidates, std::uint64_t target, SelectionStrategy strategy) {
    std::uint64_t total = 0;
    for (const auto& c : candidates) total += c.value.amount();
    if (target == 0 || total < target) {
        throw Error(ErrorCode::InsufficientFunds,
                    "need " + std::to_string(target) + ", have " + std::to_string(total));
    }
    switch (strategy) {
        case SelectionStrategy::Naive: {
            std::vector<std::size_t> order(candidates.size());
            std::iota(order.begin(), order.end(), 0);
            return take_in_order(candidates, order, target);
        }
        case SelectionStrategy::MinProofSize:
            return min_proof_size(candidates, target);
        case SelectionStrategy::NoSplit:
            if (auto exact = exact_subset(candidates, target)) return Selection{*exact, std::nullopt};
            return min_proof_size(candidates, target);
    }
    return {};
}

}  // namespace ezchain::account
