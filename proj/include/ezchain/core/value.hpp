// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "ezchain/core/encoding.hpp"

namespace ezchain {

/// A contiguous, inclusive interval of coin indices [begin, end].
/// Values are the unit of ownership: they can be split but never merged.
class Value {
public:
    /// Throws InvalidValue when begin > end.
    Value(std::uint64_t begin, std::uint64_t end);

    [[nodiscard]] std::uint64_t begin() const noexcept { return begin_; }
    [[nodiscard]] std::uint64_t end() const noexcept { return end_; }

    /// Number of coins, end - begin + 1.
    [[nodiscard]] std::uint64_t amount() const noexcept { return end_ - begin_ + 1; }

    [[nodiscard]] bool intersects(const Value& other) const noexcept {
        return begin_ <= other.end_ && other.begin_ <= end_;
    }
    [[nodiscard]] bool contains(const Value& other) const noexcept {
        return begin_ <= other.begin_ && other.end_ <= end_;
    }

    /// Prefix split: the left part keeps the low `amount` coins.
    /// Throws SplitOutOfRange unless 1 <= amount < this->amount().
    [[nodiscard]] std::pair<Value, Value> split(std::uint64_t amount) const;

    friend auto operator<=>(const Value&, const Value&) = default;
    friend bool operator==(const Value&, const Value&) = default;

private:
    std::uint64_t begin_;
    std::uint64_t end_;
};

inline std::uint64_t value_amount(const Value& v) noexcept { return v.amount(); }
inline std::pair<Value, Value> value_split(const Value& v, std::uint64_t amount) { return v.split(amount); }
inline bool values_intersect(const Value& a, const Value& b) noexcept { return a.intersects(b); }

/// True iff no two values in the list intersect.
bool pairwise_disjoint(const std::vector<Value>& values);

std::uint64_t total_amount(const std::vector<Value>& values) noexcept;

void encode(Encoder& enc, const Value& v);
Value decode_value(Decoder& dec);

}  // namespace ezchain
