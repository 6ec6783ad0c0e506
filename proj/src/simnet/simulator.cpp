// SPDX-License-Identifier: Apache-2.0
#include "ezchain/simnet/simulator.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <limits>
#include <optional>
#include <random>
#include <set>
#include <tuple>
#include <unordered_map>
#include <unordered_set>
#include <variant>

#include "ezchain/account/wallet.hpp"
#include "ezchain/consensus/chain.hpp"
#include "ezchain/consensus/challenge.hpp"
#include "ezchain/consensus/election.hpp"
#include "ezchain/consensus/package.hpp"
#include "ezchain/consensus/pool.hpp"
#include "ezchain/consensus/validation.hpp"
#include "ezchain/core/error.hpp"
#include "ezchain/simnet/network.hpp"
#include "ezchain/simnet/topology.hpp"

namespace ezchain::simnet {

namespace {

using account::BloomProof;
using account::OutgoingTransfer;
using account::ProofUnit;
using account::VerifyReason;
using account::VpbPair;
using consensus::BlockPtr;
using consensus::SigInfos;

constexpr std::uint64_t kAccTxnMsgBytes = 32 + 32 + 64 + 8;
constexpr std::uint64_t kProofRequestBytes = 8 + 32;
constexpr std::uint32_t kUnreached = std::numeric_limits<std::uint32_t>::max();

struct AccTxnMsg {
    AccTxn acctxn;
    std::uint64_t expiry = 0;
};
struct BlockMsg {
    BlockPtr block;
    Digest hash;
};
struct SigInfoMsg {
    Digest block_hash;
    std::shared_ptr<const SigInfos> siginfos;
};
struct ProofRequest {
    std::uint64_t index = 0;
};
struct ProofReply {
    std::uint64_t index = 0;
    std::optional<crypto::MtreeProof> proof;
    std::vector<Address> elements;
    bool served = false;
};
struct VpbMsg {
    std::shared_ptr<const OutgoingTransfer> transfer;
    bool adversarial = false;
    std::size_t attack = 0;
};
using Payload = std::variant<AccTxnMsg, BlockMsg, SigInfoMsg, ProofRequest, ProofReply, VpbMsg>;
using PayloadPtr = std::shared_ptr<const Payload>;

struct Delivery {
    std::size_t to = 0;
    std::size_t from = 0;
    std::uint32_t hops = 0;
    PayloadPtr payload;
    std::uint64_t bytes = 0;
};
enum class TimerKind : std::uint8_t { RoundStart, Mine, RoundEnd };
struct Timer {
    TimerKind kind;
    std::uint64_t round;
};
using Event = std::variant<Delivery, Timer>;

struct Candidate {
    BlockPtr block;
    Digest hash;
    std::shared_ptr<const SigInfos> siginfos;
};

struct Assembly {
    std::unordered_map<Digest, BlockMsg> blocks;
    std::unordered_map<Digest, std::shared_ptr<const SigInfos>> infos;
    std::map<std::uint64_t, std::vector<Candidate>> ready;
};

struct Node {
    NodeClass cls = NodeClass::Consensus;
    bool byzantine = false;
    std::unordered_set<std::uint64_t> seen;
    Assembly assembly;
};

struct ConsensusNode {
    crypto::KeyPair key;
    consensus::ChainState chain;
    consensus::TxnPool pool;
    std::map<Address, std::uint64_t> expiry;
};

enum class Stage { AwaitSpend, AwaitRespend, AwaitRespendInclusion, AwaitReplay };

struct Attack {
    AttackStrategy strategy = AttackStrategy::SpendThenOmit;
    std::size_t record = 0;
    Value value{0, 0};
    VpbPair shadow;
    std::uint64_t shadow_height = 0;
    std::size_t x = 0;
    std::size_t y = 0;
    Transaction spend;
    std::uint64_t b1 = 0;
    PayloadPtr spend_msg;
    Transaction respend;
    std::uint64_t expiry = 0;
    Stage stage = Stage::AwaitSpend;
};

struct Launch {
    std::uint64_t round;
    AttackStrategy strategy;
};

using Evidence = std::variant<ProofUnit, BloomProof>;

struct AccountNode {
    AccountNode(std::size_t i, std::size_t id, account::Wallet w, consensus::HeaderChain h)
        : index(i), node(id), wallet(std::move(w)), headers(std::move(h)) {}

    std::size_t index = 0;
    std::size_t node = 0;
    account::Wallet wallet;
    consensus::HeaderChain headers;
    std::map<std::uint64_t, ProofReply> replies;
    std::vector<PayloadPtr> parked;
    std::uint64_t active_blocks = 0;
    std::optional<Digest> last_leaf;
    std::uint64_t last_expiry = 0;
    bool keeps_evidence = false;
    std::map<std::uint64_t, Evidence> evidence;
    std::vector<Launch> launches;
    std::optional<Attack> attack;
    bool dormant = false;
};

struct GossipTrack {
    bool honest_origin = true;
    std::vector<std::uint32_t> hops;
};

struct Mined {
    std::uint64_t index = 0;
    std::uint64_t txn_count = 0;
    std::uint64_t acctxn_count = 0;
    std::uint64_t block_size = 0;
    crypto::OpCounts ops;
};

template <class... F>
struct Overloaded : F... {
    using F::operator()...;
};
template <class... F>
Overloaded(F...) -> Overloaded<F...>;

std::uint64_t prefix64(const Digest& d) noexcept {
    std::uint64_t x = 0;
    for (int i = 0; i < 8; ++i) x = (x << 8) | d.bytes[i];
    return x;
}

std::string_view expected_reason(AttackStrategy s) noexcept {
    switch (s) {
        case AttackStrategy::SpendThenOmit: return to_string(VerifyReason::MissingProof);
        case AttackStrategy::Disclose: return to_string(VerifyReason::DoubleSpend);
        case AttackStrategy::Tamper: return to_string(VerifyReason::BadMerkle);
        case AttackStrategy::ForgeSignature: return to_string(VerifyReason::BadSignature);
        case AttackStrategy::StaleReplay: return to_string(VerifyReason::DoubleSpend);
    }
    return "?";
}

std::uint64_t vpb_msg_bytes(const OutgoingTransfer& t) {
    std::uint64_t n = wire_size(t.txn) + 8 + 4;
    for (const auto& v : t.vpbs) n += wire_size(v);
    return n;
}

/// Longest owner segment visible in a held VPB, counting the holder's own
/// segment up to `processed`.
std::uint64_t max_span(const account::Holding& h, const Address& self, std::uint64_t processed) {
    const auto& v = h.vpb;
    const auto runs = account::owner_runs(v);
    std::uint64_t best = processed - std::min(processed, h.acquired_height);
    std::uint64_t prev = 0;
    bool have_prev = !v.checkpoint;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        if (i + 1 == runs.size() && runs[i].owner == self) break;
        const auto end = v.block_indices[runs[i].last];
        if (have_prev) best = std::max(best, end - prev);
        prev = end;
        have_prev = true;
    }
    return best;
}

class Sim {
public:
    explicit Sim(const SimConfig& cfg);
    SimResult run();

private:
    [[nodiscard]] std::size_t consensus_count() const noexcept { return cfg_.consensus_nodes; }
    [[nodiscard]] std::uint64_t height_of(std::size_t n) const;
    [[nodiscard]] std::uint64_t round_at(Tick t) const noexcept {
        return std::min<std::uint64_t>(cfg_.rounds, t / cfg_.block_interval + 1);
    }

    void send(Tick now, std::size_t from, std::size_t to, PayloadPtr p, std::uint64_t bytes, std::uint32_t hops = 0);
    void trace(Tick now, std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d);

    void on_delivery(Tick now, const Delivery& d);
    void on_timer(Tick now, const Timer& t);
    void on_gossip(Tick now, const Delivery& d, std::uint64_t id);
    void on_block_msg(Tick now, std::size_t n, const BlockMsg& m);
    void on_siginfo_msg(Tick now, std::size_t n, const SigInfoMsg& m);
    void try_extend(Tick now, std::size_t n);
    bool accept_candidate(Tick now, std::size_t n, const Candidate& c);
    void after_consensus_append(Tick now, std::size_t n, const Candidate& c);

    void try_mine(Tick now, std::size_t n);
    void mine(Tick now, std::size_t n);
    void round_start(Tick now, std::uint64_t r);
    void round_end(Tick now, std::uint64_t r);

    void on_acctxn(std::size_t n, const AccTxnMsg& m);
    void on_proof_request(Tick now, std::size_t n, std::size_t from, const ProofRequest& m);
    void on_header(Tick now, AccountNode& a);
    void process_blocks(Tick now, AccountNode& a);
    void on_inclusion(Tick now, AccountNode& a, std::uint64_t index, std::vector<OutgoingTransfer> out);
    void release_parked(Tick now, AccountNode& a);
    void judge(Tick now, AccountNode& a, const VpbMsg& m);

    [[nodiscard]] bool can_submit(const AccountNode& a) const;
    void submit(Tick now, AccountNode& a, std::optional<account::Submission> sub);
    void generate(Tick now, AccountNode& a);
    bool attack_turn(Tick now, AccountNode& a, std::uint64_t r);
    bool launch(Tick now, AccountNode& a, AttackStrategy s, std::uint64_t r);
    void send_forged(Tick now, AccountNode& a, OutgoingTransfer tr);
    void attack_after_block(AccountNode& a);
    void close_attack(std::size_t record, std::string observed);

    std::uint64_t audit();

    SimConfig cfg_;
    std::mt19937_64 rng_;
    std::shared_ptr<const GenesisAllocation> genesis_;
    std::vector<Node> nodes_;
    std::vector<ConsensusNode> consensus_;
    std::vector<AccountNode> accounts_;
    std::vector<crypto::KeyPair> account_keys_;
    std::unordered_map<Address, std::size_t> account_of_;
    std::unordered_map<Address, std::size_t> miner_of_;
    std::vector<bool> honest_;
    std::size_t reference_node_ = 0;
    Topology topo_;
    LinkModel links_;
    EventQueue<Event> queue_;
    consensus::SeededLottery lottery_;
    account::VerifyCache cache_;

    std::unordered_map<Digest, bool> verdicts_;
    std::unordered_map<Digest, TxnBatchPtr> batch_by_leaf_;
    std::unordered_set<Digest> included_leaves_;
    std::unordered_map<std::uint64_t, GossipTrack> tracks_;
    std::unordered_map<Signature, std::uint32_t> accepted_parts_;
    std::set<std::tuple<Signature, std::uint64_t, std::uint64_t, std::uint64_t>> judged_;
    std::optional<std::uint64_t> pending_mine_;  // round whose block no caught-up node could mine yet
    std::vector<Mined> mined_since_;
    std::uint64_t global_height_ = 0;
    std::uint64_t current_round_ = 1;
    std::uint64_t round_txns_ = 0;
    std::uint64_t confirmed_ = 0;
    std::uint64_t in_flight_ = 0;
    std::uint64_t forfeited_ = 0;
    std::uint64_t included_txns_ = 0;
    std::uint64_t included_txn_bytes_ = 0;
    std::uint64_t events_ = 0;
    std::uint64_t digest_ = 0xcbf29ce484222325ULL;
    SimResult result_;
};

std::shared_ptr<const GenesisAllocation> make_genesis(const SimConfig& cfg, const std::vector<crypto::KeyPair>& keys) {
    std::vector<GenesisEntry> entries;
    std::uint64_t next = 0;
    for (const auto& k : keys) {
        const std::uint64_t each = cfg.coins_per_account / cfg.values_per_account;
        for (std::uint64_t j = 0; j < cfg.values_per_account; ++j) {
            const std::uint64_t n = j + 1 == cfg.values_per_account ? cfg.coins_per_account - each * j : each;
            entries.push_back(GenesisEntry{k.address(), Value(next, next + n - 1)});
            next += n;
        }
    }
    return std::make_shared<const GenesisAllocation>(std::move(entries));
}

std::vector<crypto::KeyPair> derive_keys(std::string_view label, std::uint64_t seed, std::size_t n) {
    std::vector<crypto::KeyPair> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(crypto::KeyPair::derive(label, seed * 1'000'003ULL + i));
    return out;
}

std::vector<NodeClass> node_classes(const SimConfig& cfg) {
    std::vector<NodeClass> out(cfg.consensus_nodes, NodeClass::Consensus);
    out.resize(cfg.node_count(), NodeClass::Account);
    return out;
}

Sim::Sim(const SimConfig& cfg)
    : cfg_((cfg.validate(), cfg)),
      rng_(cfg.seed),
      links_(node_classes(cfg),
             NetParams{cfg.bandwidth_bps, cfg.latency_cc_max, cfg.latency_ca, cfg.latency_aa},
             cfg.seed ^ 0x9e3779b97f4a7c15ULL),
      lottery_(cfg.seed) {
    const std::size_t c = cfg_.consensus_nodes;
    const std::size_t n = cfg_.node_count();

    std::vector<std::size_t> order(c);
    for (std::size_t i = 0; i < c; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng_);
    honest_.assign(n, true);
    for (std::size_t i = 0; i < cfg_.byzantine_count(); ++i) honest_[order[i]] = false;
    for (std::size_t i = 0; i < c; ++i) {
        if (honest_[i]) {
            reference_node_ = i;
            break;
        }
    }
    topo_ = build_topology(n, honest_, cfg_.max_neighbors, rng_());

    account_keys_ = derive_keys("account", cfg_.seed, cfg_.account_nodes);
    genesis_ = make_genesis(cfg_, account_keys_);
    auto miner_keys = derive_keys("consensus", cfg_.seed, c);

    nodes_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        nodes_[i].cls = i < c ? NodeClass::Consensus : NodeClass::Account;
        nodes_[i].byzantine = !honest_[i];
    }
    consensus_.reserve(c);
    for (std::size_t i = 0; i < c; ++i) {
        miner_of_[miner_keys[i].address()] = i;
        consensus_.push_back(ConsensusNode{miner_keys[i], consensus::ChainState(genesis_, cfg_.consensus), {}, {}});
    }
    accounts_.reserve(cfg_.account_nodes);
    for (std::size_t i = 0; i < cfg_.account_nodes; ++i) {
        account_of_[account_keys_[i].address()] = i;
        accounts_.emplace_back(i, c + i, account::Wallet(account_keys_[i], *genesis_),
                               consensus::HeaderChain(genesis_, cfg_.consensus.bloom));
    }
    for (const auto& spec : cfg_.attacks) {
        auto& a = accounts_[spec.account];
        a.keeps_evidence = true;
        for (std::uint64_t k = 0; k < spec.count; ++k) a.launches.push_back(Launch{spec.start_round + k * spec.every, spec.strategy});
    }
    for (auto& a : accounts_) {
        std::stable_sort(a.launches.begin(), a.launches.end(),
                         [](const Launch& l, const Launch& r) { return l.round < r.round; });
    }

    const Tick t = cfg_.block_interval;
    for (std::uint64_t r = 1; r <= cfg_.rounds; ++r) {
        queue_.push((r - 1) * t, Timer{TimerKind::RoundStart, r});
        queue_.push((r - 1) * t + cfg_.mine_offset, Timer{TimerKind::Mine, r});
        queue_.push(r * t, Timer{TimerKind::RoundEnd, r});
    }
    result_.genesis = genesis_;
}

std::uint64_t Sim::height_of(std::size_t n) const {
    return n < consensus_count() ? consensus_[n].chain.height() : accounts_[n - consensus_count()].headers.height();
}

void Sim::trace(Tick now, std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d) {
    for (std::uint64_t x : {now, a, b, c, d}) {
        for (int i = 0; i < 8; ++i) {
            digest_ ^= (x >> (8 * i)) & 0xff;
            digest_ *= 0x100000001b3ULL;
        }
    }
}

void Sim::send(Tick now, std::size_t from, std::size_t to, PayloadPtr p, std::uint64_t bytes, std::uint32_t hops) {
    const Tick at = links_.schedule(now, from, to, bytes);
    queue_.push(at, Delivery{to, from, hops, std::move(p), bytes});
}

SimResult Sim::run() {
    const Tick end = cfg_.rounds * cfg_.block_interval + cfg_.drain_ticks;
    while (!queue_.empty() && queue_.next_tick() <= end) {
        auto [now, ev] = queue_.pop();
        ++events_;
        if (auto* d = std::get_if<Delivery>(&ev)) {
            trace(now, d->to, d->from, d->bytes, d->payload->index());
            on_delivery(now, *d);
        } else {
            const auto& t = std::get<Timer>(ev);
            trace(now, 1ULL << 40, static_cast<std::uint64_t>(t.kind), t.round, 0);
            on_timer(now, t);
        }
    }
    if (audit() != genesis_->total_coins()) result_.conserved = false;

    auto& log = result_.log;
    for (auto& rec : log.attacks) {
        if (rec.observed.empty()) rec.observed = "pending";
    }
    for (const auto& [id, track] : tracks_) {
        if (!track.honest_origin) continue;
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            if (!honest_[i]) continue;
            if (track.hops[i] == kUnreached) {
                ++result_.unreached;
            } else {
                result_.max_gossip_hops = std::max<std::uint64_t>(result_.max_gossip_hops, track.hops[i]);
            }
        }
    }
    result_.honest_diameter = topo_.diameter(honest_);
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (honest_[i] && height_of(i) < global_height_) ++result_.lagging_nodes;
    }
    result_.height = global_height_;

    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(digest_));
    auto u = [](std::uint64_t v) { return std::to_string(v); };
    log.set_meta("name", cfg_.name);
    log.set_meta("seed", u(cfg_.seed));
    log.set_meta("rounds", u(cfg_.rounds));
    log.set_meta("consensus_nodes", u(cfg_.consensus_nodes));
    log.set_meta("account_nodes", u(cfg_.account_nodes));
    log.set_meta("byzantine_nodes", u(cfg_.byzantine_count()));
    log.set_meta("block_interval_ms", u(cfg_.block_interval));
    log.set_meta("bandwidth_bps", u(cfg_.bandwidth_bps));
    log.set_meta("bloom_bits", u(cfg_.consensus.bloom.bits));
    log.set_meta("bloom_hashes", u(cfg_.consensus.bloom.hashes));
    log.set_meta("total_coins", u(genesis_->total_coins()));
    log.set_meta("blocks", u(global_height_));
    log.set_meta("included_txns", u(included_txns_));
    log.set_meta("included_txn_bytes", u(included_txn_bytes_));
    log.set_meta("honest_rejections", u(result_.honest_rejections));
    log.set_meta("conserved", result_.conserved ? "1" : "0");
    log.set_meta("unreached", u(result_.unreached));
    log.set_meta("lagging_nodes", u(result_.lagging_nodes));
    log.set_meta("max_gossip_hops", u(result_.max_gossip_hops));
    log.set_meta("honest_diameter", u(result_.honest_diameter));
    log.set_meta("events", u(events_));
    log.set_meta("messages", u(links_.messages_sent()));
    log.set_meta("bytes_sent", u(links_.bytes_sent()));
    log.set_meta("trace_digest", hex);
    return std::move(result_);
}

void Sim::on_timer(Tick now, const Timer& t) {
    switch (t.kind) {
        case TimerKind::RoundStart: round_start(now, t.round); break;
        case TimerKind::Mine: {
            // Only nodes holding the current tip can extend it.
            std::vector<std::size_t> ready;
            for (std::size_t i = 0; i < consensus_count(); ++i) {
                if (consensus_[i].chain.height() == global_height_) ready.push_back(i);
            }
            pending_mine_.reset();
            if (ready.empty()) {
                pending_mine_ = t.round;
            } else {
                mine(now, ready[lottery_.elect(ready.size(), t.round)]);
            }
            break;
        }
        case TimerKind::RoundEnd: round_end(now, t.round); break;
    }
}

void Sim::on_delivery(Tick now, const Delivery& d) {
    std::visit(Overloaded{
                   [&](const AccTxnMsg& m) { on_acctxn(d.to, m); },
                   [&](const BlockMsg& m) { on_gossip(now, d, prefix64(m.hash) << 1); },
                   [&](const SigInfoMsg& m) { on_gossip(now, d, (prefix64(m.block_hash) << 1) | 1); },
                   [&](const ProofRequest& m) { on_proof_request(now, d.to, d.from, m); },
                   [&](const ProofReply& m) {
                       auto& a = accounts_[d.to - consensus_count()];
                       a.replies[m.index] = m;
                       process_blocks(now, a);
                   },
                   [&](const VpbMsg& m) {
                       auto& a = accounts_[d.to - consensus_count()];
                       if (a.headers.height() < m.transfer->txn_block) {
                           a.parked.push_back(d.payload);
                       } else {
                           judge(now, a, m);
                       }
                   },
               },
               *d.payload);
}

void Sim::on_gossip(Tick now, const Delivery& d, std::uint64_t id) {
    if (auto t = tracks_.find(id); t != tracks_.end()) t->second.hops[d.to] = std::min(t->second.hops[d.to], d.hops);
    auto& node = nodes_[d.to];
    if (!node.seen.insert(id).second) return;
    if (!node.byzantine) {
        for (auto nb : topo_.adj[d.to]) {
            if (nb != d.from) send(now, d.to, nb, d.payload, d.bytes, d.hops + 1);
        }
    }
    if (const auto* m = std::get_if<BlockMsg>(d.payload.get())) {
        on_block_msg(now, d.to, *m);
    } else {
        on_siginfo_msg(now, d.to, std::get<SigInfoMsg>(*d.payload));
    }
}

void Sim::on_block_msg(Tick now, std::size_t n, const BlockMsg& m) {
    if (m.block->index <= height_of(n)) return;
    auto& a = nodes_[n].assembly;
    if (auto it = a.infos.find(m.hash); it != a.infos.end()) {
        a.ready[m.block->index].push_back(Candidate{m.block, m.hash, it->second});
        a.infos.erase(it);
        try_extend(now, n);
    } else {
        a.blocks.emplace(m.hash, m);
    }
}

void Sim::on_siginfo_msg(Tick now, std::size_t n, const SigInfoMsg& m) {
    auto& a = nodes_[n].assembly;
    if (auto it = a.blocks.find(m.block_hash); it != a.blocks.end()) {
        const BlockMsg b = it->second;
        a.blocks.erase(it);
        if (b.block->index <= height_of(n)) return;
        a.ready[b.block->index].push_back(Candidate{b.block, b.hash, m.siginfos});
        try_extend(now, n);
    } else {
        a.infos.emplace(m.block_hash, m.siginfos);
    }
}

void Sim::try_extend(Tick now, std::size_t n) {
    auto& ready = nodes_[n].assembly.ready;
    for (;;) {
        const auto h = height_of(n);
        while (!ready.empty() && ready.begin()->first <= h) ready.erase(ready.begin());
        if (ready.empty() || ready.begin()->first != h + 1) return;
        auto cands = std::move(ready.begin()->second);
        ready.erase(ready.begin());
        bool appended = false;
        for (const auto& c : cands) {
            if (accept_candidate(now, n, c)) {
                appended = true;
                break;
            }
        }
        if (!appended) return;
    }
}

bool Sim::accept_candidate(Tick now, std::size_t n, const Candidate& c) {
    if (n < consensus_count()) {
        auto& cn = consensus_[n];
        const auto& hc = cn.chain.headers();
        const auto t0 = std::chrono::steady_clock::now();
        const auto verdict = consensus::validate_block(*c.block, *c.siginfos, hc.tip(), hc.hash_at(hc.height()), cfg_.consensus);
        const auto t1 = std::chrono::steady_clock::now();
        result_.log.wallclock.push_back(harness::WallclockRecord{
            c.block->index, n, c.siginfos->size(),
            static_cast<std::uint64_t>(std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count())});
        if (!verdict.valid()) return false;
        cn.chain.append(c.block, c.hash, *c.siginfos);
        after_consensus_append(now, n, c);
        return true;
    }
    auto& a = accounts_[n - consensus_count()];
    auto v = verdicts_.find(c.hash);
    if (v == verdicts_.end() || !v->second || c.block->pre_hash != a.headers.hash_at(a.headers.height())) return false;
    a.headers.append(c.block, c.hash);
    on_header(now, a);
    return true;
}

void Sim::after_consensus_append(Tick now, std::size_t n, const Candidate& c) {
    auto& cn = consensus_[n];
    cn.pool.remove_included(*c.siginfos);
    const auto h = cn.chain.height();
    for (auto it = cn.expiry.begin(); it != cn.expiry.end();) {
        if (!cn.pool.contains(it->first) || it->second <= h) {
            cn.pool.erase(it->first);
            it = cn.expiry.erase(it);
        } else {
            ++it;
        }
    }
    try_mine(now, n);
}

void Sim::on_acctxn(std::size_t n, const AccTxnMsg& m) {
    auto& cn = consensus_[n];
    if (m.expiry <= cn.chain.height()) return;
    if (cn.pool.submit(m.acctxn) == consensus::SubmitResult::Accepted) cn.expiry[m.acctxn.sender] = m.expiry;
}

void Sim::try_mine(Tick now, std::size_t n) {
    if (!pending_mine_ || consensus_[n].chain.height() != global_height_) return;
    pending_mine_.reset();
    mine(now, n);
}

void Sim::mine(Tick now, std::size_t n) {
    auto& cn = consensus_[n];
    const auto& hc = cn.chain.headers();
    auto pb = consensus::package_block(cn.pool, hc.tip(), hc.hash_at(hc.height()), cn.key, now, 0, cfg_.consensus);
    if (nodes_[n].byzantine && cfg_.miner_fault == MinerFault::BadBlock) {
        pb.block.bloom.flip_bit(0);
        consensus::resign_block(pb.block, cn.key);
    }
    auto block = std::make_shared<const Block>(std::move(pb.block));
    const Digest hash = block_hash(*block);
    auto infos = std::make_shared<const SigInfos>(std::move(pb.siginfos));
    const auto verdict = consensus::validate_block(*block, *infos, hc.tip(), hc.hash_at(hc.height()), cfg_.consensus);
    verdicts_[hash] = verdict.valid();

    if (verdict.valid()) {
        Mined m{block->index, 0, infos->size(), encoded_size(*block), verdict.ops};
        std::vector<TxnBatch> batches;
        for (const auto& a : *infos) {
            auto it = batch_by_leaf_.find(a.txns_hash);
            if (it == batch_by_leaf_.end()) continue;
            included_leaves_.insert(a.txns_hash);
            m.txn_count += it->second->txns.size();
            for (const auto& t : it->second->txns) included_txn_bytes_ += wire_size(t);
            if (cfg_.record_batches) batches.push_back(*it->second);
        }
        included_txns_ += m.txn_count;
        if (cfg_.record_batches) result_.batches[block->index] = std::move(batches);
        mined_since_.push_back(m);
        global_height_ = block->index;
        cn.chain.append(block, hash, *infos);
        after_consensus_append(now, n, Candidate{block, hash, infos});
    }

    const std::uint64_t id = prefix64(hash) << 1;
    for (std::uint64_t part : {id, id | 1}) {
        nodes_[n].seen.insert(part);
        GossipTrack t{honest_[n], std::vector<std::uint32_t>(nodes_.size(), kUnreached)};
        t.hops[n] = 0;
        tracks_[part] = std::move(t);
    }
    auto msg1 = std::make_shared<const Payload>(BlockMsg{block, hash});
    auto msg2 = std::make_shared<const Payload>(SigInfoMsg{hash, infos});
    const std::uint64_t size1 = encoded_size(*block);
    const std::uint64_t size2 = encoded_size(*infos);
    const auto& adj = topo_.adj[n];
    const bool withhold = nodes_[n].byzantine && cfg_.miner_fault == MinerFault::DropMsg1;
    const auto first_honest = std::find_if(adj.begin(), adj.end(), [&](std::size_t j) { return honest_[j]; });
    for (auto it = adj.begin(); it != adj.end(); ++it) {
        if (!withhold || it == first_honest) send(now, n, *it, msg1, size1, 1);
        send(now, n, *it, msg2, size2, 1);
    }
}

void Sim::on_proof_request(Tick now, std::size_t n, std::size_t from, const ProofRequest& m) {
    const Address& who = accounts_[from - consensus_count()].wallet.address();
    ProofReply r{m.index, std::nullopt, {}, false};
    try {
        r.proof = consensus_[n].chain.serve_mtree_proof(m.index, who);
        r.served = true;
    } catch (const Error& e) {
        if (e.code() == ErrorCode::UnknownSender) {
            r.elements = consensus_[n].chain.respond_challenge(consensus::Challenge{m.index, who, consensus::ChallengeKind::Bloom}).elements;
            r.served = true;
        } else if (e.code() != ErrorCode::BlockPruned) {
            throw;
        }
    }
    const std::uint64_t bytes = 8 + 1 + (r.proof ? crypto::wire_size(*r.proof) : 4 + 32 * r.elements.size());
    send(now, n, from, std::make_shared<const Payload>(std::move(r)), bytes);
}

void Sim::on_header(Tick now, AccountNode& a) {
    const auto idx = a.headers.height();
    const Block& b = a.headers.at(idx);
    if (b.bloom.query(a.wallet.address())) {
        send(now, a.node, miner_of_.at(b.miner), std::make_shared<const Payload>(ProofRequest{idx}), kProofRequestBytes);
    }
    process_blocks(now, a);
    release_parked(now, a);
}

void Sim::process_blocks(Tick now, AccountNode& a) {
    while (a.wallet.processed_height() < a.headers.height()) {
        const auto idx = a.wallet.processed_height() + 1;
        if (a.wallet.classify(a.headers.at(idx)) == account::BlockNeed::Nothing) {
            a.wallet.apply_absent(idx);
            attack_after_block(a);
            continue;
        }
        auto it = a.replies.find(idx);
        if (it == a.replies.end()) return;
        ProofReply r = std::move(it->second);
        a.replies.erase(it);
        if (!r.served) {
            throw Error(ErrorCode::ProofUnavailable, "account " + std::to_string(a.index) + " lost the proof for block " +
                                                         std::to_string(idx));
        }
        ++a.active_blocks;
        if (r.proof) {
            auto out = a.wallet.apply_inclusion(a.headers, idx, *r.proof);
            if (a.keeps_evidence) a.evidence[idx] = ProofUnit{a.wallet.address(), batch_by_leaf_.at(r.proof->leaf), *r.proof};
            on_inclusion(now, a, idx, std::move(out));
        } else {
            BloomProof bp{idx, std::move(r.elements)};
            if (a.keeps_evidence) a.evidence[idx] = bp;
            a.wallet.apply_false_positive(a.headers, bp);
        }
        attack_after_block(a);
    }
}

void Sim::on_inclusion(Tick now, AccountNode& a, std::uint64_t index, std::vector<OutgoingTransfer> out) {
    for (auto& tr : out) {
        auto& at = a.attack;
        if (at && at->stage == Stage::AwaitRespendInclusion && tr.txn == at->respend) {
            VpbPair forged = at->shadow;
            for (const auto& [h, ev] : a.evidence) {
                if (h <= at->shadow_height || h > index) continue;
                if (h == at->b1 && at->strategy == AttackStrategy::SpendThenOmit) continue;
                if (const auto* u = std::get_if<ProofUnit>(&ev)) {
                    account::append_unit(forged, h, *u);
                } else {
                    forged.bloom_proofs.push_back(std::get<BloomProof>(ev));
                }
            }
            const Address y = account_keys_[at->y].address();
            send_forged(now, a, OutgoingTransfer{y, tr.txn, index, {account::truncate_for(forged, y)}});
            at.reset();
            continue;
        }
        if (tr.vpbs.empty()) continue;
        const bool spend = at && at->stage == Stage::AwaitSpend && tr.txn == at->spend;
        std::uint64_t amount = 0;
        for (const auto& v : tr.vpbs) amount += v.value.amount();
        in_flight_ += amount;
        const std::size_t to = accounts_[account_of_.at(tr.recipient)].node;
        const std::uint64_t bytes = vpb_msg_bytes(tr);
        auto msg = std::make_shared<const Payload>(VpbMsg{std::make_shared<const OutgoingTransfer>(std::move(tr)), false, 0});
        send(now, a.node, to, msg, bytes);
        if (!spend) continue;
        at->b1 = index;
        at->spend_msg = msg;
        if (at->strategy == AttackStrategy::StaleReplay) {
            at->stage = Stage::AwaitReplay;
        } else if (at->strategy == AttackStrategy::Tamper) {
            VpbPair forged = at->shadow;
            for (const auto& [h, ev] : a.evidence) {
                if (h <= at->shadow_height || h >= index) continue;
                if (const auto* u = std::get_if<ProofUnit>(&ev)) {
                    account::append_unit(forged, h, *u);
                } else {
                    forged.bloom_proofs.push_back(std::get<BloomProof>(ev));
                }
            }
            const auto& unit = std::get<ProofUnit>(a.evidence.at(index));
            TxnBatch tampered = *unit.txns;
            const Address y = account_keys_[at->y].address();
            Transaction claim;
            for (auto& t : tampered.txns) {
                if (t == at->spend) {
                    t.recipient = y;
                    claim = t;
                }
            }
            account::append_unit(forged, index,
                                 ProofUnit{a.wallet.address(), std::make_shared<const TxnBatch>(std::move(tampered)),
                                           unit.mtree_proof});
            send_forged(now, a, OutgoingTransfer{y, claim, index, {account::truncate_for(forged, y)}});
            at.reset();
        } else {
            at->stage = Stage::AwaitRespend;
        }
    }
}

void Sim::send_forged(Tick now, AccountNode& a, OutgoingTransfer tr) {
    const std::size_t to = accounts_[account_of_.at(tr.recipient)].node;
    const std::uint64_t bytes = vpb_msg_bytes(tr);
    send(now, a.node, to,
         std::make_shared<const Payload>(VpbMsg{std::make_shared<const OutgoingTransfer>(std::move(tr)), true, a.attack->record}),
         bytes);
}

void Sim::attack_after_block(AccountNode& a) {
    if (a.keeps_evidence) {
        std::uint64_t keep = a.wallet.processed_height() > account::Wallet::kEvidenceWindow
                                 ? a.wallet.processed_height() - account::Wallet::kEvidenceWindow
                                 : 0;
        if (a.attack) keep = std::min(keep, a.attack->shadow_height);
        a.evidence.erase(a.evidence.begin(), a.evidence.upper_bound(keep));
    }
    auto& at = a.attack;
    if (!at) return;
    const bool waiting = at->stage == Stage::AwaitSpend || at->stage == Stage::AwaitRespendInclusion;
    if (waiting && a.wallet.processed_height() >= at->expiry) {
        close_attack(at->record, "abandoned");
        at.reset();
    }
}

void Sim::close_attack(std::size_t record, std::string observed) {
    auto& rec = result_.log.attacks.at(record);
    if (rec.observed.empty()) rec.observed = std::move(observed);
}

void Sim::release_parked(Tick now, AccountNode& a) {
    if (a.parked.empty()) return;
    std::vector<PayloadPtr> keep;
    auto parked = std::move(a.parked);
    a.parked.clear();
    for (auto& p : parked) {
        const auto& m = std::get<VpbMsg>(*p);
        if (m.transfer->txn_block <= a.headers.height()) {
            judge(now, a, m);
        } else {
            keep.push_back(std::move(p));
        }
    }
    a.parked = std::move(keep);
}

void Sim::judge(Tick now, AccountNode& a, const VpbMsg& m) {
    const auto& tr = *m.transfer;
    const std::size_t sender = account_of_.at(tr.txn.sender);
    bool all_ok = true;
    for (const auto& vpb : tr.vpbs) {
        const auto res = a.wallet.accept(a.headers, vpb, tr.txn, tr.txn_block, &cache_);
        const bool first = judged_.emplace(tr.txn.sig, vpb.value.begin(), vpb.value.end(), tr.txn_block).second;
        result_.decisions.push_back(TransferDecision{tr.txn, vpb.value, tr.txn_block, a.index, res.reason, m.adversarial, first});
        result_.log.transfers.push_back(harness::TransferRecord{
            round_at(now), tr.txn_block, sender, a.index, vpb.value.amount(), res.proof_units, res.holders,
            account::wire_size(vpb), res.blocks_scanned, std::string(to_string(res.reason)), m.adversarial, tr.txn.time, now});
        if (m.adversarial) {
            close_attack(m.attack, std::string(to_string(res.reason)));
            continue;
        }
        in_flight_ -= vpb.value.amount();
        if (!res.accepted()) {
            all_ok = false;
            forfeited_ += vpb.value.amount();
            ++result_.honest_rejections;
        }
    }
    if (m.adversarial) return;
    auto& parts = accepted_parts_[tr.txn.sig];
    if (!all_ok) return;
    parts += static_cast<std::uint32_t>(tr.vpbs.size());
    if (parts < tr.txn.values.size()) return;
    accepted_parts_.erase(tr.txn.sig);
    ++confirmed_;
    result_.log.delays.push_back(harness::DelayRecord{tr.txn.time / cfg_.block_interval + 1, sender, a.index,
                                                      tr.txn_block, tr.txn.time, now});
}

bool Sim::can_submit(const AccountNode& a) const {
    if (!a.last_leaf) return true;
    return included_leaves_.count(*a.last_leaf) != 0 || a.wallet.processed_height() >= a.last_expiry;
}

void Sim::submit(Tick now, AccountNode& a, std::optional<account::Submission> sub) {
    if (!sub) return;
    const std::uint64_t expiry = a.headers.height() + 1 + cfg_.pool_expiry;
    batch_by_leaf_[sub->acctxn.txns_hash] = sub->batch;
    a.last_leaf = sub->acctxn.txns_hash;
    a.last_expiry = expiry;
    auto p = std::make_shared<const Payload>(AccTxnMsg{sub->acctxn, expiry});
    for (std::size_t c = 0; c < consensus_count(); ++c) send(now, a.node, c, p, kAccTxnMsgBytes);
}

void Sim::generate(Tick now, AccountNode& a) {
    const auto& model = cfg_.txns;
    if (a.dormant || !can_submit(a)) return;
    if (std::uniform_real_distribution<double>(0.0, 1.0)(rng_) >= model.active_probability) return;
    const std::uint64_t cap = static_cast<std::uint64_t>(cfg_.account_nodes) * cfg_.account_nodes;
    const std::uint64_t k = 1 + rng_() % model.max_per_account;
    for (std::uint64_t j = 0; j < k && round_txns_ < cap; ++j) {
        std::size_t to = rng_() % (cfg_.account_nodes - 1);
        if (to >= a.index) ++to;
        const Address& rcpt = account_keys_[to].address();
        if (model.whole_values) {
            const auto& hs = a.wallet.holdings();
            if (hs.empty()) break;
            std::optional<Value> pick;
            for (int tries = 0; tries < 8 && !pick; ++tries) {
                const auto& h = hs[rng_() % hs.size()];
                if (!h.locked && account::can_transfer(h.vpb, rcpt)) pick = h.vpb.value;
            }
            if (!pick) continue;
            a.wallet.create_txn(rcpt, {*pick}, now);
        } else {
            const std::uint64_t amount = 1 + rng_() % model.max_amount;
            if (a.wallet.spendable_to(rcpt) < amount) continue;
            a.wallet.pay(rcpt, amount, model.selection, now);
        }
        ++round_txns_;
    }
    const std::uint64_t expiry = a.headers.height() + 1 + cfg_.pool_expiry;
    submit(now, a, a.wallet.package_batch(expiry));
}

bool Sim::launch(Tick now, AccountNode& a, AttackStrategy s, std::uint64_t r) {
    const std::size_t others = cfg_.account_nodes - 1;
    auto pick_other = [&](std::size_t not_this) {
        std::size_t v = rng_() % others;
        if (v >= a.index) ++v;
        if (v == not_this && others > 1) {
            v = (v + 1) % cfg_.account_nodes;
            if (v == a.index) v = (v + 1) % cfg_.account_nodes;
        }
        return v;
    };
    const std::size_t x = pick_other(a.index);
    const std::size_t y = s == AttackStrategy::StaleReplay ? x : pick_other(x);
    const Address& xa = account_keys_[x].address();
    const Address& ya = account_keys_[y].address();
    std::vector<std::size_t> eligible;
    const auto& hs = a.wallet.holdings();
    for (std::size_t i = 0; i < hs.size(); ++i) {
        if (!hs[i].locked && account::can_transfer(hs[i].vpb, xa) && account::can_transfer(hs[i].vpb, ya)) eligible.push_back(i);
    }
    if (eligible.empty()) return false;
    const auto& h = hs[eligible[rng_() % eligible.size()]];
    Attack at;
    at.strategy = s;
    at.value = h.vpb.value;
    at.shadow = h.vpb;
    at.shadow_height = a.wallet.processed_height();
    at.x = x;
    at.y = y;
    at.spend = a.wallet.create_txn(xa, {at.value}, now);
    at.record = result_.log.attacks.size();
    result_.log.attacks.push_back(harness::AttackRecord{r, a.index, y, std::string(to_string(s)),
                                                        std::string(expected_reason(s)), ""});
    const std::uint64_t expiry = a.headers.height() + 1 + cfg_.pool_expiry;
    at.expiry = expiry;
    a.attack = std::move(at);
    submit(now, a, a.wallet.package_batch(expiry));
    return true;
}

bool Sim::attack_turn(Tick now, AccountNode& a, std::uint64_t r) {
    if (auto& at = a.attack) {
        if (at->stage == Stage::AwaitReplay) {
            const auto& orig = std::get<VpbMsg>(*at->spend_msg);
            OutgoingTransfer copy = *orig.transfer;
            send_forged(now, a, std::move(copy));
            at.reset();
            return false;
        }
        if (at->stage == Stage::AwaitRespend) {
            const Address y = account_keys_[at->y].address();
            Transaction t{a.wallet.address(), y, {at->value}, now, {}};
            const auto& signer = at->strategy == AttackStrategy::ForgeSignature ? account_keys_[at->y] : account_keys_[a.index];
            t.sig = signer.sign(t.signing_bytes());
            at->respend = t;
            at->expiry = a.headers.height() + 1 + cfg_.pool_expiry;
            at->stage = Stage::AwaitRespendInclusion;
            // The forged batch lands in every later VPB of this account.
            if (at->strategy == AttackStrategy::ForgeSignature) a.dormant = true;
            submit(now, a, a.wallet.package_external(TxnBatch{{t}}, at->expiry));
            return true;
        }
        return false;
    }
    if (a.launches.empty() || a.launches.front().round > r) return false;
    if (a.dormant) {
        throw Error(ErrorCode::ScenarioError, "round " + std::to_string(r) + ": account " + std::to_string(a.index) +
                                                  " cannot attack after forge_signature");
    }
    if (!can_submit(a) || !a.wallet.pending().empty()) return false;
    if (!launch(now, a, a.launches.front().strategy, r)) return false;
    a.launches.erase(a.launches.begin());
    return true;
}

void Sim::round_start(Tick now, std::uint64_t r) {
    current_round_ = r;
    round_txns_ = 0;
    for (auto& a : accounts_) {
        if (attack_turn(now, a, r)) continue;
        generate(now, a);
    }
}

std::uint64_t Sim::audit() {
    std::uint64_t held = 0;
    for (const auto& a : accounts_) held += a.wallet.balance();
    return held + in_flight_ + forfeited_;
}

void Sim::round_end(Tick, std::uint64_t r) {
    harness::RoundRecord rec;
    rec.round = r;
    rec.created = round_txns_;
    for (const auto& m : mined_since_) {
        rec.block_index = m.index;
        rec.txn_count += m.txn_count;
        rec.acctxn_count += m.acctxn_count;
        rec.block_size_bytes = m.block_size;
        rec.validate_hashes = m.ops.hashes;
        rec.validate_sig_verifies = m.ops.sig_verifies;
    }
    mined_since_.clear();
    rec.consensus_storage_bytes = consensus_[reference_node_].chain.storage_bytes();
    rec.confirmed = confirmed_;
    confirmed_ = 0;
    for (const auto& a : accounts_) rec.holdings_total += a.wallet.balance();
    rec.in_flight = in_flight_;
    rec.forfeited = forfeited_;
    rec.total_coins = genesis_->total_coins();
    if (rec.holdings_total + rec.in_flight + rec.forfeited != rec.total_coins) result_.conserved = false;
    result_.log.rounds.push_back(rec);

    for (const auto& a : accounts_) {
        harness::StorageRecord s;
        s.round = r;
        s.account = a.index;
        const auto processed = a.wallet.processed_height();
        for (const auto& h : a.wallet.holdings()) {
            s.vpb_bytes += account::wire_size(h.vpb);
            s.proof_unit_bytes += account::proof_unit_bytes(h.vpb);
            s.proof_units += h.vpb.proof.size();
            s.max_holders = std::max<std::uint64_t>(s.max_holders, account::holder_count(h.vpb));
            s.max_span = std::max(s.max_span, max_span(h, a.wallet.address(), processed));
            for (const auto& u : h.vpb.proof) s.max_unit_bytes = std::max(s.max_unit_bytes, account::wire_size(u) + 8);
        }
        s.checkpoint_bytes = a.wallet.checkpoints().storage_bytes();
        s.values_held = a.wallet.holdings().size();
        s.active_blocks = a.active_blocks;
        s.processed_height = processed;
        result_.log.storage.push_back(s);
    }
}

}  // namespace

SimResult run_simulation(const SimConfig& cfg) { return Sim(cfg).run(); }

}  // namespace ezchain::simnet
