// SPDX-License-Identifier: Apache-2.0
#include "ezchain/core/genesis.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace ezchain {

GenesisAllocation::GenesisAllocation(std::vector<GenesisEntry> entries) : entries_(std::move(entries)) {
    std::sort(entries_.begin(), entries_.end(),
              [](const auto& a, const auto& b) { return a.value < b.value; });
    std::uint64_t next = 0;
    for (const auto& e : entries_) {
        if (e.value.begin() != next) {
            throw Error(ErrorCode::InvalidValue,
                        "genesis allocation must cover coins contiguously from 0; gap or overlap at " +
                            std::to_string(e.value.begin()));
        }
        next = e.value.end() + 1;
    }
    total_ = next;
}

const GenesisEntry* GenesisAllocation::owner_of(const Value& v) const {
    auto it = std::upper_bound(entries_.begin(), entries_.end(), v.begin(),
                               [](std::uint64_t x, const GenesisEntry& e) { return x < e.value.begin(); });
    if (it == entries_.begin()) return nullptr;
    --it;
    return it->value.contains(v) ? &*it : nullptr;
}

std::vector<Address> GenesisAllocation::owners() const {
    std::set<Address> s;
    for (const auto& e : entries_) s.insert(e.owner);
    return {s.begin(), s.end()};
}

std::vector<Value> GenesisAllocation::values_of(const Address& owner) const {
    std::vector<Value> out;
    for (const auto& e : entries_) {
        if (e.owner == owner) out.push_back(e.value);
    }
    return out;
}

namespace {

std::uint64_t parse_u64(std::string_view tok, std::size_t line) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
        throw Error(ErrorCode::ConfigError, "genesis line " + std::to_string(line) + ": bad integer '" +
                                                std::string(tok) + "'");
    }
    return v;
}

}  // namespace

GenesisAllocation parse_genesis(std::string_view text, const AliasResolver& resolve) {
    std::vector<GenesisEntry> entries;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        std::istringstream fields(line);
        std::string owner, begin, end, extra;
        if (!(fields >> owner)) continue;
        if (!(fields >> begin >> end) || (fields >> extra)) {
            throw Error(ErrorCode::ConfigError,
                        "genesis line " + std::to_string(lineno) + ": expected '<owner> <begin> <end>'");
        }
        std::optional<Address> addr;
        if (resolve) addr = resolve(owner);
        if (!addr) {
            if (owner.size() != 64) {
                throw Error(ErrorCode::ConfigError,
                            "genesis line " + std::to_string(lineno) + ": unknown owner '" + owner + "'");
            }
            addr = Address::from_hex(owner);
        }
        entries.push_back({*addr, Value(parse_u64(begin, lineno), parse_u64(end, lineno))});
    }
    return GenesisAllocation(std::move(entries));
}

GenesisAllocation load_genesis(const std::filesystem::path& path, const AliasResolver& resolve) {
    std::ifstream f(path);
    if (!f) throw Error(ErrorCode::IoError, "cannot open genesis file " + path.string());
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_genesis(ss.str(), resolve);
}

Bytes genesis_leaf_bytes(const Address& owner, const std::vector<Value>& values) {
    Encoder enc;
    enc.fixed(owner);
    enc.u32(static_cast<std::uint32_t>(values.size()));
    for (const auto& v : values) encode(enc, v);
    return std::move(enc).take();
}

}  // namespace ezchain
