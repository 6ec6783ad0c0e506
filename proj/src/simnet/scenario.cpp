// SPDX-License-Identifier: Apache-2.0
#include "ezchain/simnet/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "ezchain/core/error.hpp"

namespace ezchain::simnet {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw Error(ErrorCode::ScenarioError, path + ": " + what);
}

void only_keys(const json& obj, const std::string& path, std::initializer_list<std::string_view> allowed) {
    if (!obj.is_object()) fail(path, "expected an object");
    const std::set<std::string_view> ok(allowed);
    for (const auto& [k, _] : obj.items()) {
        if (ok.count(k) == 0) fail(path + "." + k, "unknown key");
    }
}

template <typename T>
void read(const json& obj, const std::string& path, const char* key, T& out) {
    auto it = obj.find(key);
    if (it == obj.end()) return;
    try {
        if constexpr (std::is_same_v<T, bool>) {
            if (!it->is_boolean()) fail(path + "." + key, "expected a boolean");
        } else if constexpr (std::is_integral_v<T>) {
            if (!it->is_number_unsigned()) fail(path + "." + key, "expected a non-negative integer");
        } else if constexpr (std::is_floating_point_v<T>) {
            if (!it->is_number()) fail(path + "." + key, "expected a number");
        } else {
            if (!it->is_string()) fail(path + "." + key, "expected a string");
        }
        out = it->get<T>();
    } catch (const json::exception& e) {
        fail(path + "." + key, e.what());
    }
}

template <typename Parse>
void read_enum(const json& obj, const std::string& path, const char* key, Parse parse) {
    std::string s;
    read(obj, path, key, s);
    if (s.empty()) return;
    try {
        parse(s);
    } catch (const Error& e) {
        fail(path + "." + key, e.what());
    }
}

}  // namespace

SimConfig parse_scenario(std::string_view json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        fail("scenario", e.what());
    }
    only_keys(root, "scenario",
              {"name", "seed", "rounds", "network", "consensus", "accounts", "transactions", "attacks", "run"});
    SimConfig c;
    read(root, "scenario", "name", c.name);
    read(root, "scenario", "seed", c.seed);
    read(root, "scenario", "rounds", c.rounds);

    if (auto it = root.find("network"); it != root.end()) {
        const std::string p = "network";
        only_keys(*it, p, {"consensus_nodes", "account_nodes", "max_neighbors", "bandwidth_bps", "latency_cc_max_ms",
                           "latency_ca_ms", "latency_aa_ms"});
        read(*it, p, "consensus_nodes", c.consensus_nodes);
        read(*it, p, "account_nodes", c.account_nodes);
        read(*it, p, "max_neighbors", c.max_neighbors);
        read(*it, p, "bandwidth_bps", c.bandwidth_bps);
        read(*it, p, "latency_cc_max_ms", c.latency_cc_max);
        read(*it, p, "latency_ca_ms", c.latency_ca);
        read(*it, p, "latency_aa_ms", c.latency_aa);
    }
    if (auto it = root.find("consensus"); it != root.end()) {
        const std::string p = "consensus";
        only_keys(*it, p, {"block_interval_ms", "mine_offset_ms", "bloom_bits", "bloom_hashes", "retention_window",
                           "difficulty_bits", "backbone", "byzantine_fraction", "miner_fault"});
        read(*it, p, "block_interval_ms", c.block_interval);
        read(*it, p, "mine_offset_ms", c.mine_offset);
        read(*it, p, "bloom_bits", c.consensus.bloom.bits);
        read(*it, p, "bloom_hashes", c.consensus.bloom.hashes);
        read(*it, p, "retention_window", c.consensus.retention_window);
        read(*it, p, "difficulty_bits", c.consensus.difficulty_bits);
        read_enum(*it, p, "backbone", [&](const std::string& s) { c.backbone = parse_backbone(s); });
        read_enum(*it, p, "miner_fault", [&](const std::string& s) { c.miner_fault = parse_miner_fault(s); });
        if (auto f = it->find("byzantine_fraction"); f != it->end()) {
            if (!f->is_array() || f->size() != 2 || !(*f)[0].is_number_unsigned() || !(*f)[1].is_number_unsigned()) {
                fail(p + ".byzantine_fraction", "expected [numerator, denominator]");
            }
            c.byzantine_num = (*f)[0].get<std::uint64_t>();
            c.byzantine_den = (*f)[1].get<std::uint64_t>();
        }
    }
    if (auto it = root.find("accounts"); it != root.end()) {
        const std::string p = "accounts";
        only_keys(*it, p, {"coins", "values", "pool_expiry"});
        read(*it, p, "coins", c.coins_per_account);
        read(*it, p, "values", c.values_per_account);
        read(*it, p, "pool_expiry", c.pool_expiry);
    }
    if (auto it = root.find("transactions"); it != root.end()) {
        const std::string p = "transactions";
        only_keys(*it, p, {"active_probability", "max_per_account", "max_amount", "whole_values", "selection"});
        read(*it, p, "active_probability", c.txns.active_probability);
        read(*it, p, "max_per_account", c.txns.max_per_account);
        read(*it, p, "max_amount", c.txns.max_amount);
        read(*it, p, "whole_values", c.txns.whole_values);
        read_enum(*it, p, "selection", [&](const std::string& s) { c.txns.selection = account::parse_selection(s); });
    }
    if (auto it = root.find("attacks"); it != root.end()) {
        if (!it->is_array()) fail("attacks", "expected an array");
        for (std::size_t i = 0; i < it->size(); ++i) {
            const auto& a = (*it)[i];
            const std::string p = "attacks[" + std::to_string(i) + "]";
            only_keys(a, p, {"account", "strategy", "start_round", "every", "count"});
            AttackSpec spec;
            read(a, p, "account", spec.account);
            read(a, p, "start_round", spec.start_round);
            read(a, p, "every", spec.every);
            read(a, p, "count", spec.count);
            read_enum(a, p, "strategy", [&](const std::string& s) { spec.strategy = parse_attack(s); });
            c.attacks.push_back(spec);
        }
    }
    if (auto it = root.find("run"); it != root.end()) {
        only_keys(*it, "run", {"drain_ms", "record_batches"});
        read(*it, "run", "drain_ms", c.drain_ticks);
        read(*it, "run", "record_batches", c.record_batches);
    }
    try {
        c.validate();
    } catch (const Error& e) {
        fail("scenario", e.what());
    }
    return c;
}

SimConfig load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot read scenario " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return parse_scenario(ss.str());
    } catch (const Error& e) {
        throw Error(e.code(), path.string() + ": " + e.what());
    }
}

std::string scenario_json(const SimConfig& c) {
    json attacks = json::array();
    for (const auto& a : c.attacks) {
        attacks.push_back({{"account", a.account},
                           {"strategy", std::string(to_string(a.strategy))},
                           {"start_round", a.start_round},
                           {"every", a.every},
                           {"count", a.count}});
    }
    json root = {
        {"name", c.name},
        {"seed", c.seed},
        {"rounds", c.rounds},
        {"network",
         {{"consensus_nodes", c.consensus_nodes},
          {"account_nodes", c.account_nodes},
          {"max_neighbors", c.max_neighbors},
          {"bandwidth_bps", c.bandwidth_bps},
          {"latency_cc_max_ms", c.latency_cc_max},
          {"latency_ca_ms", c.latency_ca},
          {"latency_aa_ms", c.latency_aa}}},
        {"consensus",
         {{"block_interval_ms", c.block_interval},
          {"mine_offset_ms", c.mine_offset},
          {"bloom_bits", c.consensus.bloom.bits},
          {"bloom_hashes", c.consensus.bloom.hashes},
          {"retention_window", c.consensus.retention_window},
          {"difficulty_bits", c.consensus.difficulty_bits},
          {"backbone", std::string(to_string(c.backbone))},
          {"byzantine_fraction", {c.byzantine_num, c.byzantine_den}},
          {"miner_fault", std::string(to_string(c.miner_fault))}}},
        {"accounts", {{"coins", c.coins_per_account}, {"values", c.values_per_account}, {"pool_expiry", c.pool_expiry}}},
        {"transactions",
         {{"active_probability", c.txns.active_probability},
          {"max_per_account", c.txns.max_per_account},
          {"max_amount", c.txns.max_amount},
          {"whole_values", c.txns.whole_values},
          {"selection", std::string(account::to_string(c.txns.selection))}}},
        {"attacks", attacks},
        {"run", {{"drain_ms", c.drain_ticks}, {"record_batches", c.record_batches}}},
    };
    return root.dump(2);
}

}  // namespace ezchain::simnet
