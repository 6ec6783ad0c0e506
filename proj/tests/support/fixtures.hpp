// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "ezchain/core/bytes.hpp"
#include "ezchain/core/transaction.hpp"
#include "ezchain/crypto/keys.hpp"

namespace ezchain::testing {

Digest random_digest(std::mt19937_64& rng);
Address random_address(std::mt19937_64& rng);

/// Integer set of an interval, the enumeration oracle for value arithmetic.
std::set<std::uint64_t> enumerate(const Value& v);

/// Test key i under a fixed label.
const crypto::KeyPair& test_key(std::uint64_t i);

/// AccTxn signed by `key` over `txns_hash`.
AccTxn make_acctxn(const crypto::KeyPair& key, const Digest& txns_hash);

Transaction signed_txn(const crypto::KeyPair& sender, const Address& recipient, std::vector<Value> values, Tick time);

}  // namespace ezchain::testing
