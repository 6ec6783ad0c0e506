// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ezchain/core/bytes.hpp"
#include "ezchain/core/value.hpp"

namespace ezchain {

struct GenesisEntry {
    Address owner;
    Value value;

    friend bool operator==(const GenesisEntry&, const GenesisEntry&) = default;
};

/// Initial ownership of every coin. Entries are pairwise disjoint and cover
/// [0, total_coins - 1] exactly.
class GenesisAllocation {
public:
    /// Throws InvalidValue when the entries overlap or leave a gap.
    explicit GenesisAllocation(std::vector<GenesisEntry> entries);

    [[nodiscard]] const std::vector<GenesisEntry>& entries() const noexcept { return entries_; }
    [[nodiscard]] std::uint64_t total_coins() const noexcept { return total_; }

    /// The entry owning a superset of `v`, if any.
    [[nodiscard]] const GenesisEntry* owner_of(const Value& v) const;

    /// Distinct owners in ascending address order.
    [[nodiscard]] std::vector<Address> owners() const;
    /// All genesis values of one owner, ascending.
    [[nodiscard]] std::vector<Value> values_of(const Address& owner) const;

private:
    std::vector<GenesisEntry> entries_;  // sorted by value
    std::uint64_t total_ = 0;
};

using AliasResolver = std::function<std::optional<Address>(std::string_view)>;

/// Text format, one entry per line: `<owner> <begin> <end>`. `<owner>` is a
/// 64-char hex address, or any token `resolve` maps to an address (the
/// simulator resolves `account:<i>`). Blank lines and `#` comments are ignored.
GenesisAllocation parse_genesis(std::string_view text, const AliasResolver& resolve = {});
GenesisAllocation load_genesis(const std::filesystem::path& path, const AliasResolver& resolve = {});

/// Leaf payload for an owner's genesis entries: owner | values list.
Bytes genesis_leaf_bytes(const Address& owner, const std::vector<Value>& values);

}  // namespace ezchain
