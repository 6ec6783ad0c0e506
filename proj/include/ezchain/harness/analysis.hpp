// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ezchain/harness/metrics_log.hpp"

namespace ezchain::harness {

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;  // 1 for a perfect (or constant) fit
};

/// Ordinary least squares of y on x. Fewer than two points give a flat fit.
LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

double mean(const std::vector<double>& v);
/// Nearest-rank percentile, p in [0, 100]; 0 for an empty sample.
double percentile(std::vector<double> v, double p);

/// Transactions per simulated second.
double tps(std::uint64_t txns, std::uint64_t round_ms);

struct ThroughputReport {
    std::vector<double> tps;            // included transactions per round
    std::vector<double> confirmed_tps;  // transactions confirmed per round
    double mean_tps = 0.0;
    double peak_tps = 0.0;
    double mean_confirmed_tps = 0.0;
    double mean_created = 0.0;           // injected transactions per round
    double mean_txn_bytes = 0.0;         // canonical size of included transactions
    double bandwidth_bound_tps = 0.0;    // bandwidth / mean transaction size
};

/// Needs meta keys block_interval_ms, bandwidth_bps, included_txns and
/// included_txn_bytes. Rounds before `warmup` are left out of the means.
ThroughputReport compute_throughput(const MetricsLog& log, std::uint64_t warmup = 1);

/// Rounds in (R/4, R/2] and (R/2, R] for a run of R rounds.
struct Windows {
    std::uint64_t mid_lo = 0, mid_hi = 0, late_lo = 0, late_hi = 0;
    [[nodiscard]] bool in_mid(std::uint64_t r) const noexcept { return r > mid_lo && r <= mid_hi; }
    [[nodiscard]] bool in_late(std::uint64_t r) const noexcept { return r > late_lo && r <= late_hi; }
};
Windows windows_for(std::uint64_t rounds);

struct StorageReport {
    std::vector<double> consensus_bytes;  // per round, reference consensus node
    LinearFit consensus_fit;              // bytes against round
    bool consensus_monotone = true;       // never shrinks
    std::vector<double> account_bytes;    // per round, mean over accounts of VPB + checkpoint bytes
    double account_mid_mean = 0.0;
    double account_late_mean = 0.0;
    double account_late_mid_ratio = 0.0;
};
StorageReport compute_storage(const MetricsLog& log);

/// Proof chain length (holders after the checkpoint cut) of honest accepted transfers.
struct CkGapReport {
    std::vector<double> per_round;  // mean per round, 0 where no transfer landed
    double mid_mean = 0.0;
    double late_mean = 0.0;
    double late_mid_ratio = 0.0;
    std::uint64_t max = 0;
};
CkGapReport compute_ck_gap(const MetricsLog& log);

/// N_v * CK_gap * D_v * F_txn * S_pu with every factor taken as its observed
/// maximum: N_v values held, CK_gap holders in one VPB, D_v blocks in one owner
/// segment, F_txn the share of blocks that report an account, S_pu the largest
/// proof unit plus its block index.
struct BoundReport {
    std::uint64_t n_v = 0;
    std::uint64_t ck_gap = 0;
    std::uint64_t d_v = 0;
    double f_txn = 0.0;
    std::uint64_t s_pu = 0;
    double bound = 0.0;
    std::uint64_t max_measured = 0;  // largest per-account proof-unit bytes
    std::uint64_t violations = 0;    // (round, account) samples above the bound
    std::uint64_t first_violation_round = 0;
    [[nodiscard]] bool holds() const noexcept { return violations == 0; }
};
BoundReport storage_bound_check(const MetricsLog& log);
/// Throws BoundViolated unless the report holds.
void require_storage_bound(const BoundReport& r);

struct DelayReport {
    std::size_t count = 0;
    double mean = 0.0;
    double p50 = 0.0;
    double p95 = 0.0;
    double max = 0.0;
    LinearFit trend;                  // delay (ticks) against creation round, after warm-up
    double slope_pct_per_100 = 0.0;   // |slope| * 100 / mean, in percent
    std::vector<std::uint64_t> histogram;  // one-second bins
};
/// Transactions created before round `warmup` are left out of the trend fit.
DelayReport compute_delays(const MetricsLog& log, std::uint64_t warmup = 0);

/// Human-readable summary of one run.
std::string render_report(const MetricsLog& log);

}  // namespace ezchain::harness
