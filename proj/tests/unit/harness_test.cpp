// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <unistd.h>

#include "ezchain/core/error.hpp"
#include "ezchain/harness/analysis.hpp"
#include "ezchain/harness/csv.hpp"
#include "ezchain/harness/presets.hpp"
#include "ezchain/simnet/scenario.hpp"
#include "ezchain/simnet/simulator.hpp"

using namespace ezchain;
using namespace ezchain::harness;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    auto p = fs::temp_directory_path() / ("ezchain-test-" + std::to_string(::getpid()) + "-" + name);
    fs::remove_all(p);
    return p;
}

simnet::SimConfig tiny(std::uint64_t seed) {
    simnet::SimConfig c;
    c.seed = seed;
    c.rounds = 20;
    c.consensus.bloom = crypto::BloomParams{1u << 14, 7};
    c.values_per_account = 4;
    c.txns.max_per_account = 2;
    c.drain_ticks = 20'000;
    return c;
}

StorageRecord storage_sample(std::uint64_t round, std::uint64_t active, std::uint64_t processed) {
    StorageRecord s;
    s.round = round;
    s.values_held = 2;
    s.max_holders = 3;
    s.max_span = 5;
    s.max_unit_bytes = 100;
    s.proof_unit_bytes = 400;
    s.active_blocks = active;
    s.processed_height = processed;
    return s;
}

}  // namespace

TEST(Stats, LinearFitRecoversExactLine) {
    std::vector<double> x{1, 2, 3, 4, 5}, y;
    for (double v : x) y.push_back(3 * v + 2);
    const auto f = linear_fit(x, y);
    EXPECT_NEAR(f.slope, 3.0, 1e-12);
    EXPECT_NEAR(f.intercept, 2.0, 1e-12);
    EXPECT_NEAR(f.r2, 1.0, 1e-12);
}

TEST(Stats, LinearFitMatchesHandComputedOracle) {
    // x = 0..3, y = 1, 3, 2, 5: sxx = 5, sxy = 5.5, slope 1.1, intercept 2.75 - 1.65, r2 = 6.05 / 8.75.
    const auto f = linear_fit({0, 1, 2, 3}, {1, 3, 2, 5});
    EXPECT_NEAR(f.slope, 1.1, 1e-12);
    EXPECT_NEAR(f.intercept, 1.1, 1e-12);
    EXPECT_NEAR(f.r2, 6.05 / 8.75, 1e-12);
}

TEST(Stats, DegenerateFitsAreFlat) {
    EXPECT_EQ(linear_fit({}, {}).slope, 0.0);
    EXPECT_EQ(linear_fit({4}, {7}).slope, 0.0);
    const auto c = linear_fit({1, 2, 3}, {5, 5, 5});
    EXPECT_EQ(c.slope, 0.0);
    EXPECT_EQ(c.r2, 1.0);
}

TEST(Stats, NearestRankPercentile) {
    std::vector<double> v{10, 1, 9, 2, 8, 3, 7, 4, 6, 5};
    EXPECT_EQ(percentile(v, 50), 5);
    EXPECT_EQ(percentile(v, 95), 10);
    EXPECT_EQ(percentile(v, 0), 1);
    EXPECT_EQ(percentile(v, 100), 10);
    EXPECT_EQ(percentile({}, 95), 0);
}

TEST(Throughput, FifteenThousandInOnePointFiveSecondsIsTenThousandTps) {
    EXPECT_DOUBLE_EQ(tps(15'000, 1'500), 10'000.0);
    EXPECT_DOUBLE_EQ(tps(0, 1'500), 0.0);
}

TEST(Throughput, EmptyLogGivesZeros) {
    MetricsLog log;
    const auto t = compute_throughput(log);
    EXPECT_EQ(t.mean_tps, 0.0);
    EXPECT_EQ(t.bandwidth_bound_tps, 0.0);
    EXPECT_TRUE(t.tps.empty());
}

TEST(Throughput, BandwidthBoundUsesMeanIncludedTxnSize) {
    MetricsLog log;
    log.set_meta("block_interval_ms", "2000");
    log.set_meta("bandwidth_bps", "1000000");
    log.set_meta("included_txns", "4");
    log.set_meta("included_txn_bytes", "500");
    log.rounds.push_back(RoundRecord{1, 1, 4, 4, 2, 0, 0, 0, 0, 0, 0, 0, 0, 0});
    const auto t = compute_throughput(log, 0);
    EXPECT_DOUBLE_EQ(t.mean_txn_bytes, 125.0);
    EXPECT_DOUBLE_EQ(t.bandwidth_bound_tps, 1000.0);
    EXPECT_DOUBLE_EQ(t.mean_tps, 2.0);
}

TEST(Throughput, MonotoneInInjectionRateBelowSaturation) {
    double prev = -1;
    for (std::size_t accounts : {3u, 6u, 10u}) {
        auto c = tiny(5);
        c.rounds = 10;
        c.account_nodes = accounts;
        c.values_per_account = 20;
        c.txns.active_probability = 1.0;
        c.txns.max_per_account = 6;
        c.txns.whole_values = true;
        const auto t = compute_throughput(simnet::run_simulation(c).log, 3);
        EXPECT_GT(t.mean_tps, prev) << accounts << " accounts";
        prev = t.mean_tps;
    }
}

TEST(Windows, QuarterAndHalfOfTheRun) {
    const auto w = windows_for(1200);
    EXPECT_FALSE(w.in_mid(300));
    EXPECT_TRUE(w.in_mid(301));
    EXPECT_TRUE(w.in_mid(600));
    EXPECT_FALSE(w.in_late(600));
    EXPECT_TRUE(w.in_late(1200));
}

TEST(Bound, ProductOfObservedMaxima) {
    MetricsLog log;
    log.storage.push_back(storage_sample(1, 1, 4));
    auto r = storage_bound_check(log);
    // 2 values * 3 holders * 5 blocks * 1/4 * 100 bytes
    EXPECT_DOUBLE_EQ(r.bound, 750.0);
    EXPECT_TRUE(r.holds());
    EXPECT_NO_THROW(require_storage_bound(r));
}

TEST(Bound, DoublingTransactionFrequencyDoublesTheBound) {
    MetricsLog a, b;
    a.storage.push_back(storage_sample(1, 1, 4));
    b.storage.push_back(storage_sample(1, 2, 4));
    EXPECT_DOUBLE_EQ(storage_bound_check(b).bound, 2 * storage_bound_check(a).bound);
}

TEST(Bound, ViolationIsReportedAndThrows) {
    MetricsLog log;
    log.storage.push_back(storage_sample(1, 1, 4));
    auto big = storage_sample(2, 1, 4);
    big.proof_unit_bytes = 751;
    log.storage.push_back(big);
    const auto r = storage_bound_check(log);
    EXPECT_EQ(r.violations, 1u);
    EXPECT_EQ(r.first_violation_round, 2u);
    try {
        require_storage_bound(r);
        FAIL() << "expected BoundViolated";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::BoundViolated);
    }
}

TEST(Delay, ConstantDelaysHaveNoTrend) {
    MetricsLog log;
    for (std::uint64_t r = 1; r <= 50; ++r) log.delays.push_back(DelayRecord{r, 0, 1, r, r * 2000, r * 2000 + 8000});
    const auto d = compute_delays(log);
    EXPECT_EQ(d.count, 50u);
    EXPECT_EQ(d.p95, 8000.0);
    EXPECT_EQ(d.slope_pct_per_100, 0.0);
    ASSERT_EQ(d.histogram.size(), 9u);
    EXPECT_EQ(d.histogram[8], 50u);
}

TEST(Delay, GrowingDelaysShowTheirSlope) {
    MetricsLog log;
    // Delay 1000 + 10 r: slope 10 ticks/round over a mean of 1000 + 10 * 25.5.
    for (std::uint64_t r = 1; r <= 50; ++r) log.delays.push_back(DelayRecord{r, 0, 1, r, 0, 1000 + 10 * r});
    const auto d = compute_delays(log);
    EXPECT_NEAR(d.slope_pct_per_100, 10.0 * 100 / 1255.0 * 100, 1e-9);
}

TEST(Delay, WarmupIsLeftOutOfTheTrend) {
    MetricsLog log;
    for (std::uint64_t r = 1; r <= 40; ++r) log.delays.push_back(DelayRecord{r, 0, 1, r, 0, r <= 10 ? 9000u : 8000u});
    EXPECT_GT(compute_delays(log, 0).slope_pct_per_100, 0.0);
    EXPECT_EQ(compute_delays(log, 11).slope_pct_per_100, 0.0);
}

TEST(Storage, IdleWalletsKeepConstantStorage) {
    auto c = tiny(3);
    c.rounds = 40;
    c.txns.active_probability = 0.0;
    const auto res = simnet::run_simulation(c);
    std::map<std::uint64_t, std::uint64_t> first;
    for (const auto& s : res.log.storage) {
        const auto total = s.vpb_bytes + s.checkpoint_bytes;
        auto [it, fresh] = first.emplace(s.account, total);
        if (!fresh) EXPECT_EQ(total, it->second) << "account " << s.account << " round " << s.round;
    }
    EXPECT_EQ(first.size(), c.account_nodes);
    const auto st = compute_storage(res.log);
    EXPECT_DOUBLE_EQ(st.account_late_mid_ratio, 1.0);
    EXPECT_TRUE(st.consensus_monotone);
}

TEST(Csv, RoundTripIsLossless) {
    auto c = tiny(9);
    c.attacks.push_back(simnet::AttackSpec{0, simnet::AttackStrategy::Disclose, 3, 0, 1});
    const auto res = simnet::run_simulation(c);
    ASSERT_FALSE(res.log.transfers.empty());
    ASSERT_FALSE(res.log.attacks.empty());
    const auto dir = scratch("csv");
    write_metrics(res.log, dir);
    const auto back = read_metrics(dir);
    EXPECT_EQ(back.meta, res.log.meta);
    EXPECT_EQ(back.rounds, res.log.rounds);
    EXPECT_EQ(back.storage, res.log.storage);
    EXPECT_EQ(back.transfers, res.log.transfers);
    EXPECT_EQ(back.delays, res.log.delays);
    EXPECT_EQ(back.attacks, res.log.attacks);
    EXPECT_EQ(back.wallclock, res.log.wallclock);
    std::ifstream in(dir / "rounds.csv");
    std::string first;
    std::getline(in, first);
    EXPECT_EQ(first, kCsvSchema);
    fs::remove_all(dir);
}

TEST(Csv, BadRowReportsFileAndLine) {
    const auto dir = scratch("bad");
    write_metrics(MetricsLog{}, dir);
    {
        std::ofstream out(dir / "rounds.csv", std::ios::app);
        out << "1,2,3\n";
    }
    try {
        read_metrics(dir);
        FAIL() << "expected MalformedEncoding";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::MalformedEncoding);
        EXPECT_NE(std::string(e.what()).find("rounds.csv:3"), std::string::npos) << e.what();
    }
    fs::remove_all(dir);
}

TEST(Csv, MissingDirectoryIsIoError) {
    try {
        read_metrics(scratch("absent"));
        FAIL() << "expected IoError";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::IoError);
    }
}

TEST(Presets, ShippedScenarioFilesMatch) {
    for (const auto& [name, cfg] : shipped_presets()) {
        const auto path = fs::path(EZCHAIN_SOURCE_DIR) / "scenarios" / (name + ".json");
        ASSERT_TRUE(fs::exists(path)) << path;
        EXPECT_EQ(simnet::scenario_json(simnet::load_scenario(path)), simnet::scenario_json(cfg)) << name;
    }
}

TEST(Presets, AllValidate) {
    for (const auto& [name, cfg] : shipped_presets()) EXPECT_NO_THROW(cfg.validate()) << name;
    for (std::uint64_t s = 1; s <= 60; ++s) {
        EXPECT_NO_THROW(adversarial_preset(s).validate());
        const auto o = oracle_preset(s);
        EXPECT_NO_THROW(o.validate());
        EXPECT_LE(o.account_nodes, 6u);
        EXPECT_LE(o.rounds, 60u);
    }
}
