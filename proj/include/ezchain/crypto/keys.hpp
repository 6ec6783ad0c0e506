// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>

#include "ezchain/core/bytes.hpp"

namespace ezchain::crypto {

/// Ed25519 key pair. The address of an account is its public key.
class KeyPair {
public:
    /// Deterministic key pair from a 32-byte seed.
    static KeyPair from_seed(ByteSpan seed);
    /// Convenience for simulations: seed = SHA-256(label || index).
    static KeyPair derive(std::string_view label, std::uint64_t index);
    /// Throws KeyError unless `secret` is a 64-byte Ed25519 secret key.
    static KeyPair from_secret(ByteSpan secret);

    [[nodiscard]] const Address& address() const noexcept { return public_; }
    [[nodiscard]] Signature sign(ByteSpan msg) const;

private:
    Address public_;
    std::array<std::uint8_t, 64> secret_{};
};

/// False for a wrong key, wrong message, tampered signature or a public key
/// that is not a valid curve point.
bool verify(const Address& pk, ByteSpan msg, const Signature& sig);

}  // namespace ezchain::crypto
