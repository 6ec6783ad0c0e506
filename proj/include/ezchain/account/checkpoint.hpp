// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ezchain/core/value.hpp"

namespace ezchain::account {

struct CheckPoint {
    Value value{0, 0};
    std::uint64_t block_height = 0;
    Address trusted_owner;

    friend bool operator==(const CheckPoint&, const CheckPoint&) = default;
};

/// A wallet's own checkpoints. Heights only move forward: recording a
/// checkpoint drops older ones whose value it contains, and a record that an
/// existing entry already dominates is ignored.
class CheckpointStore {
public:
    void record(const CheckPoint& cp);

    /// True when some checkpoint at exactly `height` by `owner` covers `value`.
    [[nodiscard]] bool has(const Value& value, std::uint64_t height, const Address& owner) const;

    /// Highest checkpoint height covering `value`, if any.
    [[nodiscard]] std::optional<std::uint64_t> height_for(const Value& value) const;

    [[nodiscard]] const std::vector<CheckPoint>& entries() const noexcept { return entries_; }
    [[nodiscard]] std::size_t size() const noexcept { return entries_.size(); }
    /// value 16 | height 8 | owner 32 per entry.
    [[nodiscard]] std::uint64_t storage_bytes() const noexcept { return entries_.size() * 56; }

private:
    std::vector<CheckPoint> entries_;
};

}  // namespace ezchain::account
