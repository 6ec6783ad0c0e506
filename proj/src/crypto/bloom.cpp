// SPDX-License-Identifier: Apache-2.0
#include "ezchain/crypto/bloom.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>

#include "ezchain/crypto/hash.hpp"

namespace ezchain::crypto {

namespace {

std::uint64_t probe_seed(std::uint8_t seed, const Address& a) {
    std::array<std::uint8_t, 33> buf;
    buf[0] = seed;
    std::copy(a.bytes.begin(), a.bytes.end(), buf.begin() + 1);
    auto d = hash(buf);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = (v << 8) | d.bytes[i];
    return v;
}

template <typename F>
void for_each_probe(const BloomParams& p, const Address& a, F&& f) {
    const std::uint64_t h0 = probe_seed(0, a);
    const std::uint64_t h1 = probe_seed(1, a) | 1;
    for (std::uint32_t i = 0; i < p.hashes; ++i) {
        if (!f((h0 + i * h1) % p.bits)) return;
    }
}

}  // namespace

double bloom_expected_fpr(const BloomParams& params, std::uint64_t inserted) {
    const double k = params.hashes;
    const double ratio = k * static_cast<double>(inserted) / static_cast<double>(params.bits);
    return std::pow(1.0 - std::exp(-ratio), k);
}

BloomFilter::BloomFilter(BloomParams params) : params_(params) {
    if (params_.bits == 0 || params_.bits % 8 != 0) {
        throw Error(ErrorCode::ConfigError, "bloom bit count must be a positive multiple of 8");
    }
    if (params_.hashes == 0) throw Error(ErrorCode::ConfigError, "bloom needs at least one probe");
    bits_.assign(params_.bits / 8, 0);
}

BloomFilter BloomFilter::from_bits(BloomParams params, ByteSpan bits) {
    BloomFilter f(params);
    if (bits.size() != f.bits_.size()) throw Error(ErrorCode::MalformedEncoding, "bloom bit array size mismatch");
    std::copy(bits.begin(), bits.end(), f.bits_.begin());
    return f;
}

void BloomFilter::insert(const Address& a) {
    for_each_probe(params_, a, [this](std::uint64_t bit) {
        bits_[bit / 8] |= static_cast<std::uint8_t>(1u << (bit % 8));
        return true;
    });
}

bool BloomFilter::query(const Address& a) const {
    bool hit = true;
    for_each_probe(params_, a, [&](std::uint64_t bit) {
        hit = test_bit(bit);
        return hit;
    });
    return hit;
}

bool BloomFilter::query_positions(std::span<const std::uint64_t> positions) const {
    return std::all_of(positions.begin(), positions.end(), [this](std::uint64_t bit) { return test_bit(bit); });
}

std::vector<std::uint64_t> bloom_positions(const BloomParams& params, const Address& a) {
    std::vector<std::uint64_t> out;
    out.reserve(params.hashes);
    for_each_probe(params, a, [&](std::uint64_t bit) {
        out.push_back(bit);
        return true;
    });
    return out;
}

bool BloomFilter::test_bit(std::uint64_t index) const {
    return (bits_.at(index / 8) >> (index % 8)) & 1u;
}

void BloomFilter::flip_bit(std::uint64_t index) {
    bits_.at(index / 8) ^= static_cast<std::uint8_t>(1u << (index % 8));
}

std::uint64_t BloomFilter::popcount() const noexcept {
    std::uint64_t n = 0;
    for (auto b : bits_) n += static_cast<std::uint64_t>(std::popcount(b));
    return n;
}

BloomFilter bloom_rebuild(std::span<const Address> elements, BloomParams params) {
    std::set<Address> unique(elements.begin(), elements.end());
    BloomFilter f(params);
    for (const auto& a : unique) f.insert(a);
    return f;
}

void encode(Encoder& enc, const BloomFilter& f) {
    enc.u64(f.params().bits);
    enc.u32(f.params().hashes);
    enc.raw(f.bits());
}

BloomFilter decode_bloom(Decoder& dec) {
    BloomParams p{dec.u64(), dec.u32()};
    if (p.bits == 0 || p.bits % 8 != 0 || p.hashes == 0) {
        throw Error(ErrorCode::MalformedEncoding, "bad bloom header");
    }
    return BloomFilter::from_bits(p, dec.raw(p.bits / 8));
}

}  // namespace ezchain::crypto
