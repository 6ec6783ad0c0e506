// SPDX-License-Identifier: Apache-2.0
#include "ezchain/consensus/challenge.hpp"

#include <algorithm>

#include "ezchain/core/error.hpp"
#include "ezchain/crypto/merkle.hpp"

namespace ezchain::consensus {

void encode(Encoder& enc, const Challenge& c) {
    enc.u64(c.block_index);
    enc.fixed(c.account);
    enc.u8(static_cast<std::uint8_t>(c.kind));
}

void encode(Encoder& enc, const ChallengeResponse& r) {
    enc.u64(r.block_index);
    enc.u8(static_cast<std::uint8_t>(r.kind));
    if (r.kind == ChallengeKind::Bloom) {
        enc.u32(static_cast<std::uint32_t>(r.elements.size()));
        for (const auto& a : r.elements) enc.fixed(a);
    } else {
        encode(enc, r.siginfos);
    }
}

namespace {

ChallengeKind decode_kind(Decoder& dec) {
    auto k = dec.u8();
    if (k > 1) throw Error(ErrorCode::MalformedEncoding, "unknown challenge kind");
    return static_cast<ChallengeKind>(k);
}

}  // namespace

Challenge decode_challenge(Decoder& dec) {
    Challenge c;
    c.block_index = dec.u64();
    c.account = dec.fixed<32, AddressTag>();
    c.kind = decode_kind(dec);
    return c;
}

ChallengeResponse decode_challenge_response(Decoder& dec) {
    ChallengeResponse r;
    r.block_index = dec.u64();
    r.kind = decode_kind(dec);
    auto n = dec.u32();
    for (std::uint32_t i = 0; i < n; ++i) {
        if (r.kind == ChallengeKind::Bloom) {
            r.elements.push_back(dec.fixed<32, AddressTag>());
        } else {
            AccTxn a;
            a.sender = dec.fixed<32, AddressTag>();
            a.txns_hash = dec.fixed<32, DigestTag>();
            a.sig = dec.fixed<64, SignatureTag>();
            r.siginfos.push_back(a);
        }
    }
    return r;
}

BloomAdjudication adjudicate_bloom(const Block& block, const ChallengeResponse& r, const Address& account) {
    BloomAdjudication out;
    if (r.kind != ChallengeKind::Bloom || r.block_index != block.index) return out;
    out.reconstructs = crypto::bloom_rebuild(r.elements, block.bloom.params()) == block.bloom;
    out.account_listed = std::find(r.elements.begin(), r.elements.end(), account) != r.elements.end();
    out.false_positive = out.reconstructs && !out.account_listed && block.bloom.query(account);
    return out;
}

MtreeAdjudication adjudicate_mtree(const Block& block, const ChallengeResponse& r, const Address& account) {
    MtreeAdjudication out;
    if (r.kind != ChallengeKind::Mtree || r.block_index != block.index) return out;
    Digest root = empty_mtree_root();
    if (!r.siginfos.empty()) {
        std::vector<Digest> leaves;
        leaves.reserve(r.siginfos.size());
        for (const auto& a : r.siginfos) leaves.push_back(a.txns_hash);
        root = crypto::merkle_build(std::move(leaves)).root();
    }
    out.reconstructs = root == block.mtree_root;
    for (const auto& a : r.siginfos) {
        if (a.sender == account) {
            out.account_entry = a;
            break;
        }
    }
    return out;
}

}  // namespace ezchain::consensus
