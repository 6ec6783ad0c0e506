// SPDX-License-Identifier: Apache-2.0
#include "ezchain/harness/csv.hpp"

#include <charconv>
#include <fstream>
#include <functional>

#include "ezchain/core/error.hpp"

namespace ezchain::harness {

namespace fs = std::filesystem;

namespace {

template <class R>
struct Col {
    const char* name;
    std::function<std::string(const R&)> get;
    std::function<void(R&, std::string_view)> set;
};

std::uint64_t parse_u64(std::string_view s) {
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) throw std::invalid_argument("not an unsigned integer: " + std::string(s));
    return v;
}

template <class R>
Col<R> u64(const char* name, std::uint64_t R::*m) {
    return {name, [m](const R& r) { return std::to_string(r.*m); }, [m](R& r, std::string_view s) { r.*m = parse_u64(s); }};
}

template <class R>
Col<R> text(const char* name, std::string R::*m) {
    return {name, [m](const R& r) { return r.*m; }, [m](R& r, std::string_view s) { r.*m = std::string(s); }};
}

template <class R>
Col<R> flag(const char* name, bool R::*m) {
    return {name, [m](const R& r) { return std::string(r.*m ? "1" : "0"); },
            [m](R& r, std::string_view s) {
                if (s != "0" && s != "1") throw std::invalid_argument("not 0/1: " + std::string(s));
                r.*m = s == "1";
            }};
}

const std::vector<Col<RoundRecord>>& round_cols() {
    using R = RoundRecord;
    static const std::vector<Col<R>> cols{
        u64("round", &R::round),
        u64("block_index", &R::block_index),
        u64("created", &R::created),
        u64("txn_count", &R::txn_count),
        u64("acctxn_count", &R::acctxn_count),
        u64("block_size_bytes", &R::block_size_bytes),
        u64("validate_hashes", &R::validate_hashes),
        u64("validate_sig_verifies", &R::validate_sig_verifies),
        u64("consensus_storage_bytes", &R::consensus_storage_bytes),
        u64("confirmed", &R::confirmed),
        u64("holdings_total", &R::holdings_total),
        u64("in_flight", &R::in_flight),
        u64("forfeited", &R::forfeited),
        u64("total_coins", &R::total_coins),
    };
    return cols;
}

const std::vector<Col<StorageRecord>>& storage_cols() {
    using R = StorageRecord;
    static const std::vector<Col<R>> cols{
        u64("round", &R::round),
        u64("account", &R::account),
        u64("vpb_bytes", &R::vpb_bytes),
        u64("proof_unit_bytes", &R::proof_unit_bytes),
        u64("checkpoint_bytes", &R::checkpoint_bytes),
        u64("values_held", &R::values_held),
        u64("proof_units", &R::proof_units),
        u64("max_holders", &R::max_holders),
        u64("max_span", &R::max_span),
        u64("max_unit_bytes", &R::max_unit_bytes),
        u64("active_blocks", &R::active_blocks),
        u64("processed_height", &R::processed_height),
    };
    return cols;
}

const std::vector<Col<TransferRecord>>& transfer_cols() {
    using R = TransferRecord;
    static const std::vector<Col<R>> cols{
        u64("round", &R::round),
        u64("txn_block", &R::txn_block),
        u64("sender", &R::sender),
        u64("recipient", &R::recipient),
        u64("amount", &R::amount),
        u64("proof_units", &R::proof_units),
        u64("holders", &R::holders),
        u64("vpb_bytes", &R::vpb_bytes),
        u64("blocks_scanned", &R::blocks_scanned),
        text("reason", &R::reason),
        flag("adversarial", &R::adversarial),
        u64("create_tick", &R::create_tick),
        u64("accept_tick", &R::accept_tick),
    };
    return cols;
}

const std::vector<Col<DelayRecord>>& delay_cols() {
    using R = DelayRecord;
    static const std::vector<Col<R>> cols{
        u64("create_round", &R::create_round),
        u64("sender", &R::sender),
        u64("recipient", &R::recipient),
        u64("txn_block", &R::txn_block),
        u64("create_tick", &R::create_tick),
        u64("confirm_tick", &R::confirm_tick),
        {"delay_ticks", [](const R& r) { return std::to_string(r.delay()); }, [](R&, std::string_view) {}},
    };
    return cols;
}

const std::vector<Col<AttackRecord>>& attack_cols() {
    using R = AttackRecord;
    static const std::vector<Col<R>> cols{
        u64("round", &R::round),       u64("attacker", &R::attacker), u64("victim", &R::victim),
        text("strategy", &R::strategy), text("expected", &R::expected), text("observed", &R::observed),
    };
    return cols;
}

const std::vector<Col<WallclockRecord>>& wallclock_cols() {
    using R = WallclockRecord;
    static const std::vector<Col<R>> cols{
        u64("block_index", &R::block_index),
        u64("node", &R::node),
        u64("txn_count", &R::txn_count),
        u64("nanos", &R::nanos),
    };
    return cols;
}

using KV = std::pair<std::string, std::string>;

const std::vector<Col<KV>>& meta_cols() {
    static const std::vector<Col<KV>> cols{
        {"key", [](const KV& kv) { return kv.first; }, [](KV& kv, std::string_view s) { kv.first = std::string(s); }},
        {"value", [](const KV& kv) { return kv.second; }, [](KV& kv, std::string_view s) { kv.second = std::string(s); }},
    };
    return cols;
}

std::string clean(std::string s) {
    for (auto& ch : s) {
        if (ch == ',' || ch == '\n' || ch == '\r') ch = ';';
    }
    return s;
}

template <class R>
void write_table(const fs::path& path, const std::vector<Col<R>>& cols, const std::vector<R>& rows) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, path.string() + ": cannot open for writing");
    out << kCsvSchema << '\n';
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i].name;
    out << '\n';
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << clean(cols[i].get(r));
        out << '\n';
    }
    out.flush();
    if (!out) throw Error(ErrorCode::IoError, path.string() + ": write failed");
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (comma == std::string_view::npos) return out;
        start = comma + 1;
    }
}

template <class R>
std::vector<R> read_table(const fs::path& path, const std::vector<Col<R>>& cols) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, path.string() + ": cannot open for reading");
    auto bad = [&](std::size_t line, const std::string& what) {
        throw Error(ErrorCode::MalformedEncoding, path.string() + ":" + std::to_string(line) + ": " + what);
    };
    std::string line;
    if (!std::getline(in, line) || line != kCsvSchema) bad(1, "missing schema line");
    if (!std::getline(in, line)) bad(2, "missing header");
    const auto header = split(line);
    if (header.size() != cols.size()) bad(2, "unexpected column count");
    for (std::size_t i = 0; i < cols.size(); ++i) {
        if (header[i] != cols[i].name) bad(2, "expected column '" + std::string(cols[i].name) + "'");
    }
    std::vector<R> rows;
    std::size_t n = 2;
    while (std::getline(in, line)) {
        ++n;
        if (line.empty()) continue;
        const auto fields = split(line);
        if (fields.size() != cols.size()) bad(n, "expected " + std::to_string(cols.size()) + " fields");
        R r{};
        try {
            for (std::size_t i = 0; i < cols.size(); ++i) cols[i].set(r, fields[i]);
        } catch (const std::invalid_argument& e) {
            bad(n, e.what());
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace

void write_metrics(const MetricsLog& log, const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::IoError, dir.string() + ": " + ec.message());
    write_table(dir / "meta.csv", meta_cols(), log.meta);
    write_table(dir / "rounds.csv", round_cols(), log.rounds);
    write_table(dir / "storage.csv", storage_cols(), log.storage);
    write_table(dir / "transfers.csv", transfer_cols(), log.transfers);
    write_table(dir / "delays.csv", delay_cols(), log.delays);
    write_table(dir / "adversary.csv", attack_cols(), log.attacks);
    write_table(dir / "wallclock.csv", wallclock_cols(), log.wallclock);
}

MetricsLog read_metrics(const fs::path& dir) {
    MetricsLog log;
    log.meta = read_table(dir / "meta.csv", meta_cols());
    log.rounds = read_table(dir / "rounds.csv", round_cols());
    log.storage = read_table(dir / "storage.csv", storage_cols());
    log.transfers = read_table(dir / "transfers.csv", transfer_cols());
    log.delays = read_table(dir / "delays.csv", delay_cols());
    log.attacks = read_table(dir / "adversary.csv", attack_cols());
    if (fs::exists(dir / "wallclock.csv")) log.wallclock = read_table(dir / "wallclock.csv", wallclock_cols());
    return log;
}

}  // namespace ezchain::harness
