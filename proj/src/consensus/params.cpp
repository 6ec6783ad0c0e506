// SPDX-License-Identifier: Apache-2.0
#include "ezchain/consensus/params.hpp"

#include <string_view>

#include <sodium.h>

namespace ezchain::consensus {

Digest empty_mtree_root() {
    // A constant, so it bypasses crypto::hash and stays out of the validation op counts.
    static const Digest root = [] {
        constexpr std::string_view marker = "ezchain/empty-block";
        Digest d;
        crypto_hash_sha256(d.bytes.data(), reinterpret_cast<const unsigned char*>(marker.data()), marker.size());
        return d;
    }();
    return root;
}

}  // namespace ezchain::consensus

namespace ezchain {

void encode(Encoder& enc, const std::vector<AccTxn>& siginfos) {
    enc.u32(static_cast<std::uint32_t>(siginfos.size()));
    for (const auto& a : siginfos) encode(enc, a);
}

}  // namespace ezchain
