// SPDX-License-Identifier: Apache-2.0
#include "ezchain/core/value.hpp"

#include <algorithm>
#include <string>

namespace ezchain {

Value::Value(std::uint64_t begin, std::uint64_t end) : begin_(begin), end_(end) {
    if (begin > end) {
        throw Error(ErrorCode::InvalidValue,
                    "begin " + std::to_string(begin) + " > end " + std::to_string(end));
    }
}

std::pair<Value, Value> Value::split(std::uint64_t amount) const {
    if (amount < 1 || amount >= this->amount()) {
        throw Error(ErrorCode::SplitOutOfRange,
                    "cannot take " + std::to_string(amount) + " from " + std::to_string(this->amount()));
    }
    return {Value(begin_, begin_ + amount - 1), Value(begin_ + amount, end_)};
}

bool pairwise_disjoint(const std::vector<Value>& values) {
    auto sorted = values;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        if (sorted[i - 1].intersects(sorted[i])) return false;
    }
    return true;
}

std::uint64_t total_amount(const std::vector<Value>& values) noexcept {
    std::uint64_t sum = 0;
    for (const auto& v : values) sum += v.amount();
    return sum;
}

void encode(Encoder& enc, const Value& v) {
    enc.u64(v.begin());
    enc.u64(v.end());
}

Value decode_value(Decoder& dec) {
    auto b = dec.u64();
    auto e = dec.u64();
    if (b > e) throw Error(ErrorCode::MalformedEncoding, "value begin > end");
    return Value(b, e);
}

}  // namespace ezchain
