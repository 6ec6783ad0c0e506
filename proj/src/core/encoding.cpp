// SPDX-License-Identifier: Apache-2.0
#include "ezchain/core/encoding.hpp"

#include <limits>

namespace ezchain {

namespace {

constexpr char kHex[] = "0123456789abcdef";

int hex_nibble(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

}  // namespace

std::string to_hex(ByteSpan bytes) {
    std::string out;
    out.reserve(bytes.size() * 2);
    for (auto b : bytes) {
        out.push_back(kHex[b >> 4]);
        out.push_back(kHex[b & 0xF]);
    }
    return out;
}

Bytes from_hex(std::string_view hex) {
    if (hex.size() % 2 != 0) throw Error(ErrorCode::MalformedEncoding, "odd-length hex string");
    Bytes out(hex.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i) {
        int hi = hex_nibble(hex[2 * i]);
        int lo = hex_nibble(hex[2 * i + 1]);
        if (hi < 0 || lo < 0) throw Error(ErrorCode::MalformedEncoding, "bad hex digit");
        out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
    }
    return out;
}

void Encoder::u32(std::uint32_t v) {
    for (int shift = 24; shift >= 0; shift -= 8) out_.push_back(static_cast<std::uint8_t>(v >> shift));
}

void Encoder::u64(std::uint64_t v) {
    for (int shift = 56; shift >= 0; shift -= 8) out_.push_back(static_cast<std::uint8_t>(v >> shift));
}

void Encoder::bytes(ByteSpan b) {
    if (b.size() > std::numeric_limits<std::uint32_t>::max()) {
        throw Error(ErrorCode::MalformedEncoding, "byte string too long");
    }
    u32(static_cast<std::uint32_t>(b.size()));
    raw(b);
}

void Encoder::str(std::string_view s) {
    bytes({reinterpret_cast<const std::uint8_t*>(s.data()), s.size()});
}

ByteSpan Decoder::raw(std::size_t n) {
    if (in_.size() - pos_ < n) throw Error(ErrorCode::MalformedEncoding, "truncated input");
    auto out = in_.subspan(pos_, n);
    pos_ += n;
    return out;
}

std::uint8_t Decoder::u8() { return raw(1)[0]; }

std::uint32_t Decoder::u32() {
    auto b = raw(4);
    std::uint32_t v = 0;
    for (auto x : b) v = (v << 8) | x;
    return v;
}

std::uint64_t Decoder::u64() {
    auto b = raw(8);
    std::uint64_t v = 0;
    for (auto x : b) v = (v << 8) | x;
    return v;
}

Bytes Decoder::bytes() {
    auto n = u32();
    auto b = raw(n);
    return {b.begin(), b.end()};
}

void Decoder::expect_done() const {
    if (!done()) throw Error(ErrorCode::MalformedEncoding, "trailing bytes");
}

}  // namespace ezchain
