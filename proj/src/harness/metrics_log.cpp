// SPDX-License-Identifier: Apache-2.0
#include "ezchain/harness/metrics_log.hpp"

#include <charconv>

#include "ezchain/core/error.hpp"

namespace ezchain::harness {

void MetricsLog::set_meta(const std::string& key, std::string value) {
    for (auto& kv : meta) {
        if (kv.first == key) {
            kv.second = std::move(value);
            return;
        }
    }
    meta.emplace_back(key, std::move(value));
}

const std::string* MetricsLog::find_meta(const std::string& key) const {
    for (const auto& kv : meta) {
        if (kv.first == key) return &kv.second;
    }
    return nullptr;
}

std::uint64_t MetricsLog::meta_u64(const std::string& key) const {
    const auto* v = find_meta(key);
    if (!v) throw Error(ErrorCode::ConfigError, "metrics meta lacks '" + key + "'");
    std::uint64_t out = 0;
    auto [p, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
    if (ec != std::errc{} || p != v->data() + v->size()) {
        throw Error(ErrorCode::ConfigError, "metrics meta '" + key + "' is not an integer: " + *v);
    }
    return out;
}

double MetricsLog::meta_double(const std::string& key) const {
    const auto* v = find_meta(key);
    if (!v) throw Error(ErrorCode::ConfigError, "metrics meta lacks '" + key + "'");
    try {
        std::size_t used = 0;
        const double d = std::stod(*v, &used);
        if (used == v->size()) return d;
    } catch (const std::exception&) {
    }
    throw Error(ErrorCode::ConfigError, "metrics meta '" + key + "' is not a number: " + *v);
}

}  // namespace ezchain::harness
