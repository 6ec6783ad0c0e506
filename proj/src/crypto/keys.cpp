// SPDX-License-Identifier: Apache-2.0
#include "ezchain/crypto/keys.hpp"

#include <sodium.h>

#include "ezchain/core/encoding.hpp"
#include "ezchain/crypto/hash.hpp"

namespace ezchain::crypto {

namespace {

void ensure_sodium() {
    static const bool ok = sodium_init() >= 0;
    if (!ok) throw Error(ErrorCode::KeyError, "libsodium failed to initialize");
}

}  // namespace

KeyPair KeyPair::from_seed(ByteSpan seed) {
    ensure_sodium();
    if (seed.size() != crypto_sign_SEEDBYTES) throw Error(ErrorCode::KeyError, "seed must be 32 bytes");
    KeyPair kp;
    crypto_sign_seed_keypair(kp.public_.bytes.data(), kp.secret_.data(), seed.data());
    return kp;
}

KeyPair KeyPair::derive(std::string_view label, std::uint64_t index) {
    Encoder enc;
    enc.str(label);
    enc.u64(index);
    return from_seed(hash(enc.data()).span());
}

KeyPair KeyPair::from_secret(ByteSpan secret) {
    ensure_sodium();
    if (secret.size() != crypto_sign_SECRETKEYBYTES) {
        throw Error(ErrorCode::KeyError, "secret key must be 64 bytes");
    }
    KeyPair kp;
    std::copy(secret.begin(), secret.end(), kp.secret_.begin());
    crypto_sign_ed25519_sk_to_pk(kp.public_.bytes.data(), kp.secret_.data());
    // libsodium secret keys embed the public key; reject inconsistent ones.
    std::array<std::uint8_t, 32> seed;
    crypto_sign_ed25519_sk_to_seed(seed.data(), kp.secret_.data());
    if (from_seed(seed).public_ != kp.public_) throw Error(ErrorCode::KeyError, "inconsistent secret key");
    return kp;
}

Signature KeyPair::sign(ByteSpan msg) const {
    Signature sig;
    crypto_sign_detached(sig.bytes.data(), nullptr, msg.data(), msg.size(), secret_.data());
    return sig;
}

bool verify(const Address& pk, ByteSpan msg, const Signature& sig) {
    ensure_sodium();
    count_sig_verify();
    return crypto_sign_verify_detached(sig.bytes.data(), msg.data(), msg.size(), pk.bytes.data()) == 0;
}

}  // namespace ezchain::crypto
