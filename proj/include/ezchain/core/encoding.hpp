// SPDX-License-Identifier: Apache-2.0
#pragma once

// Canonical byte encoding. Every hash, signature and size metric in the
// project is computed over these bytes. Layout rules (see docs/encoding.md):
//   - integers are big-endian, fixed width (u8, u32, u64)
//   - fixed-width byte strings (digests, addresses, signatures) are raw
//   - variable byte strings and lists carry a u32 length/count prefix
//   - struct fields are written in declaration order

#include <cstdint>
#include <string_view>

#include "ezchain/core/bytes.hpp"

namespace ezchain {

class Encoder {
public:
    void u8(std::uint8_t v) { out_.push_back(v); }
    void u32(std::uint32_t v);
    void u64(std::uint64_t v);
    void raw(ByteSpan b) { out_.insert(out_.end(), b.begin(), b.end()); }
    void bytes(ByteSpan b);  // length-prefixed
    void str(std::string_view s);

    template <std::size_t N, typename Tag>
    void fixed(const FixedBytes<N, Tag>& v) {
        raw(v.span());
    }

    [[nodiscard]] const Bytes& data() const& noexcept { return out_; }
    [[nodiscard]] Bytes take() && noexcept { return std::move(out_); }
    [[nodiscard]] std::size_t size() const noexcept { return out_.size(); }

private:
    Bytes out_;
};

/// Bounds-checked reader for the wire formats that need decoding
/// (challenge payloads, Bloom filters, Merkle proofs).
class Decoder {
public:
    explicit Decoder(ByteSpan in) : in_(in) {}

    std::uint8_t u8();
    std::uint32_t u32();
    std::uint64_t u64();
    ByteSpan raw(std::size_t n);
    Bytes bytes();

    template <std::size_t N, typename Tag>
    FixedBytes<N, Tag> fixed() {
        return FixedBytes<N, Tag>::from_span(raw(N));
    }

    [[nodiscard]] bool done() const noexcept { return pos_ == in_.size(); }
    void expect_done() const;

private:
    ByteSpan in_;
    std::size_t pos_ = 0;
};

/// Canonical bytes of any type with an `encode(Encoder&, const T&)` overload.
template <typename T>
Bytes canonical_encode(const T& x) {
    Encoder enc;
    encode(enc, x);
    return std::move(enc).take();
}

template <typename T>
std::size_t encoded_size(const T& x) {
    Encoder enc;
    encode(enc, x);
    return enc.size();
}

}  // namespace ezchain
