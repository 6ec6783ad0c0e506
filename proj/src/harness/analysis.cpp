// SPDX-License-Identifier: Apache-2.0
#include "ezchain/harness/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "ezchain/core/error.hpp"

namespace ezchain::harness {

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
    LinearFit f;
    const std::size_t n = std::min(x.size(), y.size());
    if (n < 2) {
        f.intercept = n ? y[0] : 0.0;
        f.r2 = 1.0;
        return f;
    }
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    f.slope = sxx > 0 ? sxy / sxx : 0.0;
    f.intercept = my - f.slope * mx;
    if (syy == 0) {
        f.r2 = 1.0;
        return f;
    }
    double ssr = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = y[i] - (f.intercept + f.slope * x[i]);
        ssr += e * e;
    }
    f.r2 = 1.0 - ssr / syy;
    return f;
}

double mean(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    double s = 0;
    for (double d : v) s += d;
    return s / static_cast<double>(v.size());
}

double percentile(std::vector<double> v, double p) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const double rank = std::ceil(p / 100.0 * static_cast<double>(v.size()));
    const std::size_t idx = rank < 1 ? 0 : static_cast<std::size_t>(rank) - 1;
    return v[std::min(idx, v.size() - 1)];
}

double tps(std::uint64_t txns, std::uint64_t round_ms) {
    if (round_ms == 0) return 0.0;
    return static_cast<double>(txns) * 1000.0 / static_cast<double>(round_ms);
}

ThroughputReport compute_throughput(const MetricsLog& log, std::uint64_t warmup) {
    ThroughputReport r;
    if (log.rounds.empty()) return r;
    const std::uint64_t t = log.meta_u64("block_interval_ms");
    std::vector<double> counted, confirmed, created;
    for (const auto& rec : log.rounds) {
        r.tps.push_back(tps(rec.txn_count, t));
        r.confirmed_tps.push_back(tps(rec.confirmed, t));
        if (rec.round < warmup) continue;
        counted.push_back(r.tps.back());
        confirmed.push_back(r.confirmed_tps.back());
        created.push_back(static_cast<double>(rec.created));
    }
    r.mean_tps = mean(counted);
    r.peak_tps = r.tps.empty() ? 0.0 : *std::max_element(r.tps.begin(), r.tps.end());
    r.mean_confirmed_tps = mean(confirmed);
    r.mean_created = mean(created);
    const std::uint64_t txns = log.meta_u64("included_txns");
    if (txns > 0) {
        r.mean_txn_bytes = static_cast<double>(log.meta_u64("included_txn_bytes")) / static_cast<double>(txns);
        r.bandwidth_bound_tps = static_cast<double>(log.meta_u64("bandwidth_bps")) / (8.0 * r.mean_txn_bytes);
    }
    return r;
}

Windows windows_for(std::uint64_t rounds) { return Windows{rounds / 4, rounds / 2, rounds / 2, rounds}; }

StorageReport compute_storage(const MetricsLog& log) {
    StorageReport r;
    if (log.rounds.empty()) return r;
    std::vector<double> x;
    double prev = -1;
    for (const auto& rec : log.rounds) {
        const double b = static_cast<double>(rec.consensus_storage_bytes);
        if (b < prev) r.consensus_monotone = false;
        prev = b;
        x.push_back(static_cast<double>(rec.round));
        r.consensus_bytes.push_back(b);
    }
    r.consensus_fit = linear_fit(x, r.consensus_bytes);

    std::map<std::uint64_t, std::pair<double, std::uint64_t>> per_round;
    for (const auto& s : log.storage) {
        auto& [sum, n] = per_round[s.round];
        sum += static_cast<double>(s.vpb_bytes + s.checkpoint_bytes);
        ++n;
    }
    const auto w = windows_for(log.rounds.back().round);
    std::vector<double> mid, late;
    for (const auto& [round, acc] : per_round) {
        const double v = acc.first / static_cast<double>(acc.second);
        r.account_bytes.push_back(v);
        if (w.in_mid(round)) mid.push_back(v);
        if (w.in_late(round)) late.push_back(v);
    }
    r.account_mid_mean = mean(mid);
    r.account_late_mean = mean(late);
    r.account_late_mid_ratio = r.account_mid_mean > 0 ? r.account_late_mean / r.account_mid_mean : 0.0;
    return r;
}

CkGapReport compute_ck_gap(const MetricsLog& log) {
    CkGapReport r;
    if (log.rounds.empty()) return r;
    const std::uint64_t rounds = log.rounds.back().round;
    std::vector<double> sum(rounds + 1, 0.0), n(rounds + 1, 0.0);
    std::vector<double> mid, late;
    const auto w = windows_for(rounds);
    for (const auto& t : log.transfers) {
        if (t.adversarial || t.reason != "accept" || t.round > rounds) continue;
        sum[t.round] += static_cast<double>(t.holders);
        n[t.round] += 1;
        r.max = std::max(r.max, t.holders);
        if (w.in_mid(t.round)) mid.push_back(static_cast<double>(t.holders));
        if (w.in_late(t.round)) late.push_back(static_cast<double>(t.holders));
    }
    for (std::uint64_t i = 1; i <= rounds; ++i) r.per_round.push_back(n[i] > 0 ? sum[i] / n[i] : 0.0);
    r.mid_mean = mean(mid);
    r.late_mean = mean(late);
    r.late_mid_ratio = r.mid_mean > 0 ? r.late_mean / r.mid_mean : 0.0;
    return r;
}

BoundReport storage_bound_check(const MetricsLog& log) {
    BoundReport r;
    std::map<std::uint64_t, const StorageRecord*> last;
    for (const auto& s : log.storage) {
        r.n_v = std::max(r.n_v, s.values_held);
        r.ck_gap = std::max(r.ck_gap, s.max_holders);
        r.d_v = std::max(r.d_v, s.max_span);
        r.s_pu = std::max(r.s_pu, s.max_unit_bytes);
        r.max_measured = std::max(r.max_measured, s.proof_unit_bytes);
        last[s.account] = &s;
    }
    for (const auto& t : log.transfers) {
        if (!t.adversarial && t.reason == "accept") r.ck_gap = std::max(r.ck_gap, t.holders);
    }
    for (const auto& [_, s] : last) {
        if (s->processed_height == 0) continue;
        r.f_txn = std::max(r.f_txn, static_cast<double>(s->active_blocks) / static_cast<double>(s->processed_height));
    }
    r.bound = static_cast<double>(r.n_v) * static_cast<double>(r.ck_gap) * static_cast<double>(r.d_v) * r.f_txn *
              static_cast<double>(r.s_pu);
    for (const auto& s : log.storage) {
        if (static_cast<double>(s.proof_unit_bytes) > r.bound) {
            if (r.violations == 0) r.first_violation_round = s.round;
            ++r.violations;
        }
    }
    return r;
}

void require_storage_bound(const BoundReport& r) {
    if (r.holds()) return;
    throw Error(ErrorCode::BoundViolated, std::to_string(r.violations) + " samples exceed the storage bound " +
                                              std::to_string(r.bound) + ", first in round " +
                                              std::to_string(r.first_violation_round));
}

DelayReport compute_delays(const MetricsLog& log, std::uint64_t warmup) {
    DelayReport r;
    std::vector<double> d, x, y;
    for (const auto& rec : log.delays) {
        const double v = static_cast<double>(rec.delay());
        d.push_back(v);
        if (rec.create_round >= warmup) {
            x.push_back(static_cast<double>(rec.create_round));
            y.push_back(v);
        }
        const std::size_t bin = static_cast<std::size_t>(rec.delay() / 1000);
        if (r.histogram.size() <= bin) r.histogram.resize(bin + 1, 0);
        ++r.histogram[bin];
    }
    r.count = d.size();
    if (d.empty()) return r;
    r.mean = mean(d);
    r.p50 = percentile(d, 50);
    r.p95 = percentile(d, 95);
    r.max = *std::max_element(d.begin(), d.end());
    r.trend = linear_fit(x, y);
    const double m = mean(y);
    r.slope_pct_per_100 = m > 0 ? std::fabs(r.trend.slope) * 100.0 / m * 100.0 : 0.0;
    return r;
}

std::string render_report(const MetricsLog& log) {
    std::string out;
    char buf[256];
    auto line = [&](const char* fmt, auto... args) {
        std::snprintf(buf, sizeof buf, fmt, args...);
        out += buf;
        out += '\n';
    };
    auto meta = [&](const char* k) {
        const auto* v = log.find_meta(k);
        return v ? v->c_str() : "-";
    };
    line("run            %s (seed %s, %s rounds)", meta("name"), meta("seed"), meta("rounds"));
    line("nodes          %s consensus (%s byzantine), %s accounts", meta("consensus_nodes"), meta("byzantine_nodes"),
         meta("account_nodes"));
    line("blocks         %s valid, trace %s", meta("blocks"), meta("trace_digest"));
    if (log.rounds.empty()) return out;

    std::uint64_t block_size = 0;
    bool constant = true;
    bool conserved = true;
    for (const auto& r : log.rounds) {
        if (r.holdings_total + r.in_flight + r.forfeited != r.total_coins) conserved = false;
        if (r.block_index == 0) continue;
        if (block_size != 0 && r.block_size_bytes != block_size) constant = false;
        block_size = r.block_size_bytes;
    }
    line("block size     %llu bytes (%s)", static_cast<unsigned long long>(block_size), constant ? "constant" : "varies");
    line("conservation   %s, forfeited %llu", conserved ? "held every round" : "VIOLATED",
         static_cast<unsigned long long>(log.rounds.back().forfeited));

    const auto tp = compute_throughput(log);
    line("throughput     mean %.1f tps, peak %.1f tps, confirmed %.1f tps", tp.mean_tps, tp.peak_tps,
         tp.mean_confirmed_tps);
    line("               injected %.1f txns/round, bandwidth bound %.1f tps (%.1f B/txn)", tp.mean_created,
         tp.bandwidth_bound_tps, tp.mean_txn_bytes);

    const auto st = compute_storage(log);
    line("consensus      %.0f bytes at end, %.1f bytes/round, R^2 %.5f", st.consensus_bytes.back(),
         st.consensus_fit.slope, st.consensus_fit.r2);
    line("account        mid %.0f bytes, late %.0f bytes, late/mid %.3f", st.account_mid_mean, st.account_late_mean,
         st.account_late_mid_ratio);

    const auto ck = compute_ck_gap(log);
    line("ck_gap         mid %.3f, late %.3f, late/mid %.3f, max %llu", ck.mid_mean, ck.late_mean, ck.late_mid_ratio,
         static_cast<unsigned long long>(ck.max));

    const auto b = storage_bound_check(log);
    line("bound          N_v %llu * CK_gap %llu * D_v %llu * F_txn %.3f * S_pu %llu = %.0f bytes",
         static_cast<unsigned long long>(b.n_v), static_cast<unsigned long long>(b.ck_gap),
         static_cast<unsigned long long>(b.d_v), b.f_txn, static_cast<unsigned long long>(b.s_pu), b.bound);
    line("               max measured %llu bytes, %s", static_cast<unsigned long long>(b.max_measured),
         b.holds() ? "holds" : "VIOLATED");

    const auto d = compute_delays(log);
    line("delay          %zu txns, p50 %.0f ms, p95 %.0f ms, max %.0f ms, trend %.4f%% per 100 rounds", d.count, d.p50,
         d.p95, d.max, d.slope_pct_per_100);

    std::map<std::string, std::pair<std::uint64_t, std::uint64_t>> attacks;
    for (const auto& a : log.attacks) {
        auto& [n, ok] = attacks[a.strategy];
        ++n;
        ok += a.observed == a.expected;
    }
    for (const auto& [s, v] : attacks) {
        line("attack         %s: %llu/%llu rejected as expected", s.c_str(), static_cast<unsigned long long>(v.second),
             static_cast<unsigned long long>(v.first));
    }
    return out;
}

}  // namespace ezchain::harness
