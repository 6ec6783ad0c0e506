// SPDX-License-Identifier: Apache-2.0
#include "fixtures.hpp"

#include <map>
#include <memory>

namespace ezchain::testing {

Digest random_digest(std::mt19937_64& rng) {
    Digest d;
    for (auto& b : d.bytes) b = static_cast<std::uint8_t>(rng());
    return d;
}

Address random_address(std::mt19937_64& rng) {
    Address a;
    for (auto& b : a.bytes) b = static_cast<std::uint8_t>(rng());
    return a;
}

std::set<std::uint64_t> enumerate(const Value& v) {
    std::set<std::uint64_t> out;
    for (auto i = v.begin(); i <= v.end(); ++i) out.insert(i);
    return out;
}

const crypto::KeyPair& test_key(std::uint64_t i) {
    static std::map<std::uint64_t, std::unique_ptr<crypto::KeyPair>> cache;
    auto& slot = cache[i];
    if (!slot) slot = std::make_unique<crypto::KeyPair>(crypto::KeyPair::derive("test", i));
    return *slot;
}

AccTxn make_acctxn(const crypto::KeyPair& key, const Digest& txns_hash) {
    return AccTxn{key.address(), txns_hash, key.sign(txns_hash.span())};
}

Transaction signed_txn(const crypto::KeyPair& sender, const Address& recipient, std::vector<Value> values, Tick time) {
    Transaction t{sender.address(), recipient, std::move(values), time, {}};
    t.sig = sender.sign(t.signing_bytes());
    return t;
}

}  // namespace ezchain::testing
