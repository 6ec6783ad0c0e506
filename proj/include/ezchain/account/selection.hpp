// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "ezchain/core/value.hpp"

namespace ezchain::account {

enum class SelectionStrategy { Naive, MinProofSize, NoSplit };

std::string_view to_string(SelectionStrategy s) noexcept;
/// Throws ConfigError for an unknown name.
SelectionStrategy parse_selection(std::string_view name);

struct Candidate {
    Value value;
    std::size_t proof_units = 0;
};

/// `chosen` index into the candidate list. When `split_amount` is set the last
/// chosen value is split: its low `split_amount` coins are paid, the rest is change.
struct Selection {
    std::vector<std::size_t> chosen;
    std::optional<std::uint64_t> split_amount;
};

/// Throws InsufficientFunds when the candidates sum to less than `target`.
Selection select_values(const std::vector<Candidate>& candidates, std::uint64_t target, SelectionStrategy strategy);

}  // namespace ezchain::account
