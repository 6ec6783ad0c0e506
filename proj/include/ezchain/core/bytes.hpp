// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ezchain {

using Bytes = std::vector<std::uint8_t>;
using ByteSpan = std::span<const std::uint8_t>;

std::string to_hex(ByteSpan bytes);
Bytes from_hex(std::string_view hex);

/// Fixed-width byte string. Distinct tags keep digests, addresses and
/// signatures from being mixed up.
template <std::size_t N, typename Tag>
struct FixedBytes {
    static constexpr std::size_t size = N;
    std::array<std::uint8_t, N> bytes{};

    [[nodiscard]] ByteSpan span() const noexcept { return {bytes.data(), bytes.size()}; }
    [[nodiscard]] std::string hex() const { return to_hex(span()); }
    [[nodiscard]] bool is_zero() const noexcept {
        for (auto b : bytes) {
            if (b != 0) return false;
        }
        return true;
    }

    static FixedBytes from_span(ByteSpan in);
    static FixedBytes from_hex(std::string_view hex) { return from_span(ezchain::from_hex(hex)); }

    friend auto operator<=>(const FixedBytes&, const FixedBytes&) = default;
    friend bool operator==(const FixedBytes&, const FixedBytes&) = default;
};

struct DigestTag {};
struct AddressTag {};
struct SignatureTag {};

using Digest = FixedBytes<32, DigestTag>;
/// An account or miner address is its Ed25519 public key.
using Address = FixedBytes<32, AddressTag>;
using Signature = FixedBytes<64, SignatureTag>;

/// Simulation time; 1 tick = 1 ms.
using Tick = std::uint64_t;

}  // namespace ezchain

template <std::size_t N, typename Tag>
struct std::hash<ezchain::FixedBytes<N, Tag>> {
    std::size_t operator()(const ezchain::FixedBytes<N, Tag>& v) const noexcept {
        std::size_t h = 0;
        for (std::size_t i = 0; i < sizeof(std::size_t) && i < N; ++i) {
            h = (h << 8) | v.bytes[i];
        }
        return h;
    }
};

#include "ezchain/core/error.hpp"

template <std::size_t N, typename Tag>
ezchain::FixedBytes<N, Tag> ezchain::FixedBytes<N, Tag>::from_span(ByteSpan in) {
    if (in.size() != N) {
        throw Error(ErrorCode::MalformedEncoding,
                    "expected " + std::to_string(N) + " bytes, got " + std::to_string(in.size()));
    }
    FixedBytes out;
    std::copy(in.begin(), in.end(), out.bytes.begin());
    return out;
}
