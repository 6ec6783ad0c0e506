// SPDX-License-Identifier: Apache-2.0
#include "ezchain/harness/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <memory>
#include <sstream>

#include <unistd.h>

#include "ezchain/consensus/chain.hpp"
#include "ezchain/consensus/package.hpp"
#include "ezchain/consensus/pool.hpp"
#include "ezchain/consensus/validation.hpp"
#include "ezchain/core/encoding.hpp"
#include "ezchain/crypto/hash.hpp"
#include "ezchain/crypto/keys.hpp"
#include "ezchain/harness/analysis.hpp"
#include "ezchain/harness/csv.hpp"
#include "ezchain/harness/presets.hpp"
#include "ezchain/harness/replayer.hpp"
#include "ezchain/simnet/simulator.hpp"

namespace ezchain::harness {

namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kMaxBlockBytes = 524'288;

std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

struct Suite {
    const AcceptanceOptions& opts;
    std::uint64_t runs = 0;
    std::uint64_t rounds_audited = 0;
    std::vector<std::string> unconserved;

    simnet::SimResult simulate(const simnet::SimConfig& cfg) {
        auto res = simnet::run_simulation(cfg);
        ++runs;
        rounds_audited += res.log.rounds.size();
        bool ok = res.conserved;
        for (const auto& r : res.log.rounds) ok = ok && r.holdings_total + r.in_flight + r.forfeited == r.total_coins;
        if (!ok) unconserved.push_back(cfg.name + "/" + std::to_string(cfg.seed));
        return res;
    }

    void save(const MetricsLog& log, const std::string& name) const {
        if (!opts.artifacts.empty()) write_metrics(log, opts.artifacts / name);
    }
};

consensus::ConsensusParams default_params() { return simnet::SimConfig{}.consensus; }

std::shared_ptr<const GenesisAllocation> single_owner(const crypto::KeyPair& k) {
    return std::make_shared<GenesisAllocation>(std::vector<GenesisEntry>{{k.address(), Value(0, 999)}});
}

AccTxn sign_acctxn(const crypto::KeyPair& k, const Digest& h) { return AccTxn{k.address(), h, k.sign(h.span())}; }

CriterionResult block_size() {
    CriterionResult r{1, "constant block size", true, ""};
    const auto params = default_params();
    const auto miner = crypto::KeyPair::derive("acceptance-miner", 0);
    consensus::ChainState chain(single_owner(miner), params);
    std::vector<std::size_t> sizes;
    for (std::size_t n : {1u, 100u, 10'000u}) {
        consensus::TxnPool pool;
        for (std::size_t i = 0; i < n; ++i) {
            const auto k = crypto::KeyPair::derive("acceptance-sender", i);
            pool.submit(sign_acctxn(k, crypto::hash(k.address().span())));
        }
        const auto pb = consensus::package_block(pool, chain.headers().tip(), chain.headers().hash_at(0), miner, 1, 0, params);
        sizes.push_back(canonical_encode(pb.block).size());
    }
    r.pass = std::all_of(sizes.begin(), sizes.end(), [&](std::size_t s) { return s == sizes[0]; }) && sizes[0] <= kMaxBlockBytes;
    r.detail = "pools of 1/100/10000 AccTxns -> " + std::to_string(sizes[0]) + "/" + std::to_string(sizes[1]) + "/" +
               std::to_string(sizes[2]) + " bytes (limit 524288)";
    return r;
}

CriterionResult validation_cost() {
    CriterionResult r{2, "validation cost independent of txn count", true, ""};
    constexpr std::size_t kSenders = 100;
    const auto params = default_params();
    const auto miner = crypto::KeyPair::derive("acceptance-miner", 0);
    consensus::ChainState chain(single_owner(miner), params);
    std::vector<crypto::OpCounts> ops;
    std::vector<double> micros;
    for (std::size_t txns : {10u, 1'000u, 15'000u}) {
        consensus::TxnPool pool;
        std::size_t made = 0;
        for (std::size_t s = 0; s < kSenders; ++s) {
            const auto k = crypto::KeyPair::derive("acceptance-sender", s);
            const auto to = crypto::KeyPair::derive("acceptance-sender", (s + 1) % kSenders).address();
            TxnBatch batch;
            // Senders without a transaction still submit, so the AccTxn set is fixed.
            for (std::size_t i = s; i < txns; i += kSenders, ++made) {
                Transaction t{k.address(), to, {Value(i, i)}, 1, {}};
                t.sig = k.sign(t.signing_bytes());
                batch.txns.push_back(std::move(t));
            }
            pool.submit(sign_acctxn(k, crypto::hash(canonical_encode(batch))));
        }
        const auto pb = consensus::package_block(pool, chain.headers().tip(), chain.headers().hash_at(0), miner, 1, 0, params);
        std::vector<double> samples;
        consensus::BlockVerdict v;
        for (int rep = 0; rep < 9; ++rep) {
            const auto t0 = std::chrono::steady_clock::now();
            v = consensus::validate_block(pb.block, pb.siginfos, chain.headers().tip(), chain.headers().hash_at(0), params);
            samples.push_back(std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() - t0).count());
        }
        r.pass = r.pass && v.valid() && made == txns;
        ops.push_back(v.ops);
        micros.push_back(percentile(samples, 50));
    }
    r.pass = r.pass && ops[0] == ops[1] && ops[1] == ops[2];
    r.detail = "10/1000/15000 txns over " + std::to_string(kSenders) + " senders -> " + std::to_string(ops[0].hashes) +
               " hashes, " + std::to_string(ops[0].sig_verifies) + " signature checks each" + (r.pass ? "" : " (differ)") +
               "; wall " + fmt("%.0f", micros[0]) + "/" + fmt("%.0f", micros[1]) + "/" + fmt("%.0f", micros[2]) +
               " us (informational)";
    return r;
}

CriterionResult double_spend(Suite& s) {
    CriterionResult r{3, "double-spend soundness", true, ""};
    std::uint64_t rejected = 0, attacks = 0;
    std::string first_bad;
    for (std::uint64_t seed = 1; seed <= s.opts.adversarial_seeds; ++seed) {
        const auto res = s.simulate(adversarial_preset(seed));
        for (const auto& a : res.log.attacks) {
            ++attacks;
            if (a.observed == "missing_proof" || a.observed == "double_spend") {
                ++rejected;
            } else if (first_bad.empty()) {
                first_bad = "seed " + std::to_string(seed) + ": " + a.observed;
            }
        }
        if (res.log.attacks.empty() && first_bad.empty()) first_bad = "seed " + std::to_string(seed) + ": attack never launched";
    }
    r.pass = attacks == s.opts.adversarial_seeds && rejected == attacks;
    r.detail = std::to_string(rejected) + "/" + std::to_string(s.opts.adversarial_seeds) +
               " spend-then-omit transfers rejected with missing_proof or double_spend";
    if (!first_bad.empty()) r.detail += "; " + first_bad;
    return r;
}

CriterionResult oracle(Suite& s) {
    CriterionResult r{4, "oracle equivalence", true, ""};
    std::uint64_t compared = 0, agreed = 0, rejections = 0;
    std::string first_bad;
    for (std::uint64_t seed = 1; seed <= s.opts.oracle_seeds; ++seed) {
        const auto res = s.simulate(oracle_preset(seed));
        Replayer rep(*res.genesis);
        for (const auto& [h, batches] : res.batches) rep.apply_block(h, batches);
        for (const auto& d : res.decisions) {
            if (!d.first_delivery) continue;
            ++compared;
            const bool accepted = d.reason == account::VerifyReason::Accept;
            rejections += accepted ? 0 : 1;
            if (rep.legit(d.txn, d.value, d.txn_block).value_or(false) == accepted) {
                ++agreed;
            } else if (first_bad.empty()) {
                first_bad = "seed " + std::to_string(seed) + " block " + std::to_string(d.txn_block) + ": verifier " +
                            std::string(account::to_string(d.reason));
            }
        }
    }
    r.pass = compared > 0 && agreed == compared;
    r.detail = std::to_string(agreed) + "/" + std::to_string(compared) + " transfer decisions agree over " +
               std::to_string(s.opts.oracle_seeds) + " seeds (" + std::to_string(rejections) + " rejections)";
    if (!first_bad.empty()) r.detail += "; " + first_bad;
    return r;
}

std::vector<CriterionResult> storage(Suite& s) {
    const auto res = s.simulate(storage_preset());
    s.save(res.log, "storage");
    const auto ck = compute_ck_gap(res.log);
    const auto st = compute_storage(res.log);
    const auto bound = storage_bound_check(res.log);

    CriterionResult c6{6, "CK_gap convergence", ck.late_mean <= 1.10 * ck.mid_mean && ck.mid_mean > 0, ""};
    c6.detail = "mean proof-chain length " + fmt("%.3f", ck.mid_mean) + " over (300,600], " + fmt("%.3f", ck.late_mean) +
                " over (600,1200], ratio " + fmt("%.3f", ck.late_mid_ratio) + " (limit 1.10)";

    CriterionResult c7{7, "account storage plateau", st.account_late_mid_ratio < 1.10 && bound.holds(), ""};
    c7.detail = "late/mid storage ratio " + fmt("%.3f", st.account_late_mid_ratio) + " (limit 1.10); largest VPB " +
                std::to_string(bound.max_measured) + " bytes vs bound " + fmt("%.0f", bound.bound) + ", " +
                std::to_string(bound.violations) + " violations";

    CriterionResult c8{8, "consensus storage linearity", st.consensus_fit.r2 > 0.99 && st.consensus_monotone, ""};
    c8.detail = "R^2 " + fmt("%.5f", st.consensus_fit.r2) + " over " + std::to_string(st.consensus_bytes.size()) + " blocks, " +
                fmt("%.0f", st.consensus_fit.slope) + " bytes/block (limit R^2 > 0.99)";
    return {c6, c7, c8};
}

CriterionResult delay(Suite& s) {
    const auto cfg = delay_preset();
    const auto res = s.simulate(cfg);
    s.save(res.log, "delay");
    const auto d = compute_delays(res.log, cfg.rounds / 4 + 1);
    CriterionResult r{9, "confirmation delay", d.count > 0 && d.p95 <= 10'000.0 && d.slope_pct_per_100 < 0.1, ""};
    r.detail = std::to_string(d.count) + " txns, p95 " + fmt("%.0f", d.p95) + " ms (limit 10000), trend " +
               fmt("%.4f", d.slope_pct_per_100) + "% per 100 rounds after round " + std::to_string(cfg.rounds / 4) +
               " (limit 0.1)";
    return r;
}

CriterionResult throughput(Suite& s) {
    const auto cfg = throughput_preset();
    const auto res = s.simulate(cfg);
    s.save(res.log, "throughput");
    // Confirmations trail inclusion by a few rounds; measure once the pipeline is full.
    const auto t = compute_throughput(res.log, cfg.rounds / 4 + 1);
    const double per_round_bound = t.bandwidth_bound_tps * static_cast<double>(cfg.block_interval) / 1000.0;
    const bool saturated = t.mean_created >= 2.0 * per_round_bound;
    CriterionResult r{10, "throughput beyond the bandwidth bound",
                      saturated && t.bandwidth_bound_tps > 0 && t.mean_confirmed_tps >= 1.5 * t.bandwidth_bound_tps, ""};
    r.detail = "confirmed " + fmt("%.0f", t.mean_confirmed_tps) + " tps, included " + fmt("%.0f", t.mean_tps) +
               " tps vs bound " + fmt("%.1f", t.bandwidth_bound_tps) + " tps (ratio " +
               fmt("%.2f", t.bandwidth_bound_tps > 0 ? t.mean_confirmed_tps / t.bandwidth_bound_tps : 0.0) +
               ", limit 1.5); injected " + fmt("%.0f", t.mean_created) + " txns/round vs 2x bound " +
               fmt("%.0f", 2.0 * per_round_bound);
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

CriterionResult determinism(Suite& s) {
    CriterionResult r{11, "determinism", true, ""};
    const fs::path base = s.opts.artifacts.empty()
                              ? fs::temp_directory_path() / ("ezchain-determinism-" + std::to_string(::getpid()))
                              : s.opts.artifacts / "determinism";
    auto delay_cfg = delay_preset();
    delay_cfg.rounds = 200;
    std::size_t files = 0;
    for (const auto& cfg : {oracle_preset(3), delay_cfg}) {
        for (const char* run : {"a", "b"}) write_metrics(s.simulate(cfg).log, base / cfg.name / run);
        for (const auto& e : fs::directory_iterator(base / cfg.name / "a")) {
            const auto name = e.path().filename();
            if (name == "wallclock.csv") continue;
            ++files;
            if (slurp(e.path()) != slurp(base / cfg.name / "b" / name)) {
                r.pass = false;
                r.detail += cfg.name + "/" + name.string() + " differs; ";
            }
        }
    }
    if (s.opts.artifacts.empty()) fs::remove_all(base);
    r.detail += std::to_string(files) + " CSV files compared across two runs of 2 scenarios (wallclock.csv excluded)";
    return r;
}

}  // namespace

std::string format_result(const CriterionResult& r) {
    std::ostringstream os;
    os << (r.pass ? "PASS" : "FAIL") << ' ' << (r.id < 10 ? " " : "") << r.id << "  " << r.name << ": " << r.detail;
    return os.str();
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts) {
    Suite s{opts, 0, 0, {}};
    std::vector<CriterionResult> out;
    auto wanted = [&](int id) { return opts.only.empty() || std::count(opts.only.begin(), opts.only.end(), id) > 0; };
    auto emit = [&](CriterionResult r) {
        if (opts.on_result) opts.on_result(r);
        out.push_back(std::move(r));
    };
    if (wanted(1)) emit(block_size());
    if (wanted(2)) emit(validation_cost());
    if (wanted(3)) emit(double_spend(s));
    if (wanted(4)) emit(oracle(s));
    if (wanted(6) || wanted(7) || wanted(8)) {
        for (auto& r : storage(s)) {
            if (wanted(r.id)) emit(std::move(r));
        }
    }
    if (wanted(9)) emit(delay(s));
    if (wanted(10)) emit(throughput(s));
    if (wanted(11)) emit(determinism(s));
    if (wanted(5)) {
        CriterionResult r{5, "conservation", s.runs > 0 && s.unconserved.empty(), ""};
        r.detail = "holdings + in flight + forfeited = total coins in " + std::to_string(s.rounds_audited) + " rounds of " +
                   std::to_string(s.runs) + " runs";
        if (!s.unconserved.empty()) r.detail += "; broken in " + s.unconserved.front();
        if (s.runs == 0) r.detail = "no simulation ran";
        emit(std::move(r));
    }
    return out;
}

}  // namespace ezchain::harness
