// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ezchain/core/bytes.hpp"
#include "ezchain/core/encoding.hpp"

namespace ezchain::crypto {

struct BloomParams {
    std::uint64_t bits = std::uint64_t{1} << 21;  // 256 KiB
    std::uint32_t hashes = 7;

    friend bool operator==(const BloomParams&, const BloomParams&) = default;
};

/// Analytic false-positive rate (1 - e^(-kn/m))^k.
double bloom_expected_fpr(const BloomParams& params, std::uint64_t inserted);

/// Fixed-size Bloom filter over addresses.
///
/// Probe i of address a is (h0 + i * h1) mod m, where h_j is the leading
/// big-endian u64 of SHA-256(u8(j) || a) and h1 is forced odd.
class BloomFilter {
public:
    BloomFilter() : BloomFilter(BloomParams{}) {}
    explicit BloomFilter(BloomParams params);
    /// Throws MalformedEncoding unless `bits` holds exactly params.bits / 8 bytes.
    static BloomFilter from_bits(BloomParams params, ByteSpan bits);

    void insert(const Address& a);
    [[nodiscard]] bool query(const Address& a) const;
    /// Same as query() for precomputed bloom_positions() of these params.
    [[nodiscard]] bool query_positions(std::span<const std::uint64_t> positions) const;

    [[nodiscard]] const BloomParams& params() const noexcept { return params_; }
    [[nodiscard]] std::span<const std::uint8_t> bits() const noexcept { return bits_; }
    [[nodiscard]] std::uint64_t popcount() const noexcept;

    /// Flips one bit; used by mutation tests and the bad-block adversary.
    void flip_bit(std::uint64_t index);
    [[nodiscard]] bool test_bit(std::uint64_t index) const;

    friend bool operator==(const BloomFilter&, const BloomFilter&) = default;

private:
    BloomParams params_;
    std::vector<std::uint8_t> bits_;
};

/// The k bit positions probed for `a`.
std::vector<std::uint64_t> bloom_positions(const BloomParams& params, const Address& a);

inline void bloom_insert(BloomFilter& f, const Address& a) { f.insert(a); }
inline bool bloom_query(const BloomFilter& f, const Address& a) { return f.query(a); }

/// Filter holding exactly the deduplicated `elements`; bit-identical for any
/// ordering or multiplicity of the same set.
BloomFilter bloom_rebuild(std::span<const Address> elements, BloomParams params = {});

/// Wire format: m u64 | k u32 | m/8 raw bytes (bit i = byte i/8, mask 1 << (i%8)).
void encode(Encoder& enc, const BloomFilter& f);
BloomFilter decode_bloom(Decoder& dec);

}  // namespace ezchain::crypto
