// Runs every acceptance criterion and prints one PASS/FAIL line per criterion.
// Usage: acceptance [criterion numbers...]   (default: all)

#include "chain_fixture.hpp"
#include "components_oracle.hpp"
#include "race_oracle.hpp"

#include <blocksim/adversary/attack.hpp>
#include <blocksim/analysis/cluster.hpp>
#include <blocksim/analysis/deanon.hpp>
#include <blocksim/analysis/metrics.hpp>
#include <blocksim/netsim/simulation.hpp>
#include <blocksim/scenario/scenario.hpp>

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/gamma.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

using namespace blocksim;
using blocksim::testing::ChainFixture;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* format, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

uint32_t worker_count()
{
    return std::max(1u, std::thread::hardware_concurrency());
}

// ---------------------------------------------------------------------------
// 1. Value conservation on simulated chains

struct LedgerAudit {
    uint64_t blocks = 0;
    uint64_t txs = 0;
    uint64_t double_spends = 0;
    uint64_t negative_fees = 0;
    uint64_t excess_claims = 0;
    bool balanced = false;   ///< sum of outputs left + fees == sum of coinbase claims
    bool state_matches = false;
};

int64_t reward_oracle(uint64_t height, const RewardSchedule& schedule)
{
    const uint64_t halvings = height / schedule.halving_interval;
    return halvings >= 63 ? 0 : schedule.initial_reward.units() >> halvings;
}

/// Replays the best chain from scratch with a bare outpoint map.
LedgerAudit audit_chain(const ChainStore& store, const RewardSchedule& schedule)
{
    LedgerAudit audit;
    std::map<OutPoint, int64_t> live;
    int64_t claims = 0, fees_total = 0;
    for (const Hash256& id : store.best_chain()) {
        const Block& block = *store.find(id)->block;
        int64_t block_fees = 0;
        for (const auto& tx : block.txs) {
            ++audit.txs;
            int64_t in = 0, out = 0;
            for (const auto& input : tx->inputs()) {
                auto it = live.find(input.prevout);
                if (it == live.end()) {
                    ++audit.double_spends;
                    continue;
                }
                in += it->second;
                live.erase(it);
            }
            for (uint32_t i = 0; i < tx->outputs().size(); ++i) {
                out += tx->outputs()[i].amount.units();
                live.emplace(OutPoint{tx->id(), i}, tx->outputs()[i].amount.units());
            }
            if (in < out) ++audit.negative_fees;
            block_fees += in - out;
        }
        int64_t claim = 0;
        const Transaction& cb = *block.coinbase;
        for (uint32_t i = 0; i < cb.outputs().size(); ++i) {
            claim += cb.outputs()[i].amount.units();
            live.emplace(OutPoint{cb.id(), i}, cb.outputs()[i].amount.units());
        }
        if (block.header.height > 0 && claim > reward_oracle(block.header.height, schedule) + block_fees) {
            ++audit.excess_claims;
        }
        claims += claim;
        fees_total += block_fees;
        ++audit.blocks;
    }
    int64_t left = 0;
    for (const auto& [_, v] : live) left += v;
    audit.balanced = left + fees_total == claims && left == store.best_utxo().total().units();

    std::map<OutPoint, int64_t> actual;
    for (const auto& [op, out] : store.best_utxo()) actual.emplace(op, out.amount.units());
    audit.state_matches = actual == live;
    return audit;
}

/// Two outputs spending one coin of `node`'s first funded key, sent to two different nodes.
bool inject_conflict(Simulation& sim, uint32_t from_node, uint32_t other_node, std::size_t salt)
{
    const NodeState& n = sim.node(from_node);
    const UtxoSet& utxo = n.chain.best_utxo();
    for (std::size_t k = 0; k < n.keys.size(); ++k) {
        const std::size_t key = (k + salt) % n.keys.size();
        const Address from = derive_address(n.keys[key].public_key);
        const auto& owned = utxo.owned_by(from);
        if (owned.empty()) continue;
        const OutPoint op = *owned.begin();
        const int64_t value = utxo.find(op)->amount.units();
        if (value < 10'000) continue;
        auto make = [&](uint32_t to_node) {
            const Address to = derive_address(sim.node(to_node).keys[0].public_key);
            Transaction tx = Transaction::spend({TxInput{op, {}, {}}}, {TxOutput{to, Amount(value - 5'000)}});
            return make_tx_ref(sign_transaction(tx, std::vector<KeyPair>{n.keys[key]}, utxo, sim.scheme()));
        };
        sim.broadcast_transaction(from_node, make(other_node), sim.now());
        sim.broadcast_transaction(other_node, make(from_node), sim.now());
        return true;
    }
    return false;
}

Verdict conservation()
{
    const auto start = std::chrono::steady_clock::now();
    LedgerAudit total;
    uint64_t unbalanced = 0, mismatched = 0, conflicts = 0, reorgs = 0, chains = 0;
    for (uint64_t s = 0; s < 100; ++s) {
        SimConfig cfg;
        cfg.rng_seed = derive_seed(0xC0'45E7, s);
        cfg.node_count = 2;
        cfg.latency.lo_ms = 10'000;
        cfg.miners = {{0, 0.5}, {1, 0.5}};
        cfg.workload.tx_rate = 0.01;
        cfg.workload.genesis_funding = Amount::coins(10).units();
        cfg.reward.halving_interval = 250;
        cfg.max_blocks = 1000;
        cfg.duration = 1e9;
        Simulation sim(cfg);
        for (int i = 1; i <= 5; ++i) {
            sim.run_until(i * 15'000.0);
            conflicts += inject_conflict(sim, 0, 1, i) ? 1 : 0;
        }
        EventTrace trace = sim.run();
        for (const auto& r : trace.records) reorgs += r.reorg_depth > 0 ? 1 : 0;
        for (uint32_t node = 0; node < 2; ++node) {
            LedgerAudit a = audit_chain(sim.node(node).chain, cfg.reward);
            total.blocks += a.blocks;
            total.txs += a.txs;
            total.double_spends += a.double_spends;
            total.negative_fees += a.negative_fees;
            total.excess_claims += a.excess_claims;
            unbalanced += a.balanced ? 0 : 1;
            mismatched += a.state_matches ? 0 : 1;
            ++chains;
        }
    }
    const double elapsed = seconds_since(start);
    const bool pass = total.double_spends == 0 && total.negative_fees == 0 && total.excess_claims == 0 &&
                      unbalanced == 0 && mismatched == 0 && elapsed < 60.0;
    return {pass, fmt("%llu chains, %llu blocks, %llu txs, %llu conflicting pairs injected, %llu reorgs; "
                      "double spends %llu, negative fees %llu, excess claims %llu, unbalanced %llu, "
                      "state mismatches %llu; %.1f s (limit 60 s)",
                      (unsigned long long)chains, (unsigned long long)total.blocks, (unsigned long long)total.txs,
                      (unsigned long long)conflicts, (unsigned long long)reorgs,
                      (unsigned long long)total.double_spends, (unsigned long long)total.negative_fees,
                      (unsigned long long)total.excess_claims, (unsigned long long)unbalanced,
                      (unsigned long long)mismatched, elapsed)};
}

// ---------------------------------------------------------------------------
// 2. Fork choice independent of arrival order

Verdict fork_choice_order()
{
    ChainFixture fx(4, {Amount::coins(5).units(), Amount::coins(5).units()});
    fx.params.orphan_limit = 1000;
    ChainStore builder(fx.params);
    std::mt19937_64 rng(2024);

    std::vector<Block> blocks;
    std::map<Hash256, uint64_t> height{{builder.genesis_id(), 0}};
    std::vector<Hash256> ids{builder.genesis_id()};

    auto add_child = [&](const Hash256& parent, uint64_t nonce) {
        std::vector<TransactionRef> txs;
        if (rng() % 3 == 0) {
            UtxoSet view = builder.utxo_at(parent);
            for (int k = 0; k < 4; ++k) {
                const auto& owned = view.owned_by(fx.addr(k));
                if (owned.empty()) continue;
                const OutPoint op = *owned.begin();
                const int64_t value = view.find(op)->amount.units();
                txs.push_back(fx.pay(view, {{op, k}}, {TxOutput{fx.addr((k + 1) % 4), Amount(value - 1'000)}}));
                break;
            }
        }
        Block b = fx.child(builder, parent, std::move(txs), int(rng() % 4), 600.0, nonce);
        const Hash256 id = b.id();
        if (builder.connect_block(b).kind == ConnectKind::Invalid) return false;
        blocks.push_back(std::move(b));
        height[id] = height[parent] + 1;
        ids.push_back(id);
        return true;
    };

    uint64_t nonce = 0;
    while (blocks.size() < 49) add_child(ids[rng() % ids.size()], ++nonce);
    uint64_t top = 0;
    for (const auto& [_, h] : height) top = std::max(top, h);
    Hash256 deepest;
    for (const auto& id : ids) {
        if (height[id] == top) {
            deepest = id;
            break;
        }
    }
    while (!add_child(deepest, ++nonce)) {
    }
    const Hash256 expected = ids.back();

    std::size_t leaves = 0;
    for (const auto& id : ids) leaves += builder.find(id)->children.empty() ? 1 : 0;
    const Bytes reference_state = builder.best_utxo().serialize();

    std::size_t wrong_tip = 0, wrong_state = 0, incomplete = 0;
    std::vector<std::size_t> order(blocks.size());
    for (int perm = 0; perm < 1000; ++perm) {
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::shuffle(order.begin(), order.end(), rng);
        ChainStore store(fx.params);
        for (std::size_t i : order) store.connect_block(blocks[i]);
        wrong_tip += store.best_tip() == expected ? 0 : 1;
        wrong_state += store.best_utxo().serialize() == reference_state ? 0 : 1;
        incomplete += store.size() == blocks.size() + 1 && store.orphan_count() == 0 ? 0 : 1;
    }
    return {wrong_tip == 0 && wrong_state == 0 && incomplete == 0,
            fmt("tree of %zu blocks, %zu leaves, deepest height %llu; 1000 permutations: wrong tip %zu, "
                "wrong ledger %zu, incomplete %zu",
                blocks.size(), leaves, (unsigned long long)(top + 1), wrong_tip, wrong_state, incomplete)};
}

// ---------------------------------------------------------------------------
// 3. Block share follows hashrate share

Verdict hashrate_share()
{
    SimConfig cfg;
    cfg.rng_seed = 20;
    cfg.node_count = 2;
    cfg.miners = {{0, 0.2}, {1, 0.8}};
    cfg.max_blocks = 10'000;
    cfg.duration = 1e12;
    EventTrace trace = run_simulation(cfg);
    uint64_t mine = 0, all = 0;
    for (const auto& r : trace.records) {
        if (r.kind != EventKind::BlockFound) continue;
        ++all;
        mine += r.node == 0 ? 1 : 0;
    }
    using boost::math::binomial_distribution;
    const double lo = binomial_distribution<>::find_lower_bound_on_p(double(all), double(mine), 0.005);
    const double hi = binomial_distribution<>::find_upper_bound_on_p(double(all), double(mine), 0.005);
    const double frac = double(mine) / double(all);
    return {all == 10'000 && lo <= 0.2 && 0.2 <= hi,
            fmt("%llu of %llu blocks = %.4f, 99%% interval [%.4f, %.4f] vs 0.20", (unsigned long long)mine,
                (unsigned long long)all, frac, lo, hi)};
}

// ---------------------------------------------------------------------------
// 4. Majority overtake and the catch-up race

Verdict majority_attack()
{
    const auto start = std::chrono::steady_clock::now();
    AttackSpec strong;
    strong.kind = AttackKind::MajorityOvertake;
    strong.attacker_share = 0.6;
    strong.confirmations = 6;
    strong.horizon = 200;
    strong.trials = 1000;
    strong.jobs = worker_count();
    strong.base.rng_seed = 60;
    AttackOutcome a = run_attack(strong);

    AttackSpec weak = strong;
    weak.attacker_share = 0.4;
    weak.horizon = 100;
    weak.trials = 100'000;
    weak.base.rng_seed = 40;
    AttackOutcome b = run_attack(weak);

    const testing::RaceSetup race{0.4, 6, 0, 0, 1, 100};
    const int oracle_trials = 1'000'000;
    const double oracle = testing::race_rate(race, oracle_trials, 4040);
    const double sigma = std::sqrt(oracle * (1 - oracle) * (1.0 / double(b.trial_count) + 1.0 / oracle_trials));
    const double gap = std::abs(b.success_rate - oracle);
    const double elapsed = seconds_since(start);

    const bool pass = a.success_rate >= 0.99 && gap <= 3 * sigma && elapsed < 300.0;
    return {pass, fmt("q=0.6 deficit 6: %.4f over %llu trials (need >= 0.99); q=0.4 deficit 6: %.5f over %llu "
                      "trials vs oracle %.5f, |diff| = %.2f sigma (limit 3); closed form (q/p)^7 = %.5f; "
                      "%.1f s (limit 300 s)",
                      a.success_rate, (unsigned long long)a.trial_count, b.success_rate,
                      (unsigned long long)b.trial_count, oracle, sigma > 0 ? gap / sigma : 0.0,
                      std::pow(0.4 / 0.6, 7), elapsed)};
}

// ---------------------------------------------------------------------------
// 5. Double-spend success is monotone in q and z

double slope(const std::vector<double>& x, const std::vector<double>& y)
{
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= double(x.size());
    my /= double(y.size());
    double num = 0, den = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        num += (x[i] - mx) * (y[i] - my);
        den += (x[i] - mx) * (x[i] - mx);
    }
    return num / den;
}

Verdict double_spend_grid()
{
    const std::vector<double> qs{0.1, 0.2, 0.3, 0.4};
    const std::vector<double> zs{1, 2, 4, 6};
    const uint64_t trials = 2000;
    std::vector<std::vector<AttackOutcome>> cell(qs.size());
    for (std::size_t i = 0; i < qs.size(); ++i) {
        for (double z : zs) {
            AttackSpec spec;
            spec.kind = AttackKind::DoubleSpend;
            spec.attacker_share = qs[i];
            spec.confirmations = uint32_t(z);
            spec.trials = trials;
            spec.horizon = 100;
            spec.jobs = worker_count();
            spec.base.rng_seed = derive_seed(505, i * 10 + uint64_t(z));
            cell[i].push_back(run_attack(spec));
        }
    }
    auto ci = [&](const AttackOutcome& o) { return clopper_pearson(o.success_count, o.trial_count); };

    int reversals = 0, bad_slopes = 0;
    for (std::size_t i = 0; i < qs.size(); ++i) {
        for (std::size_t j = 0; j < zs.size(); ++j) {
            // a step in the wrong direction is tolerated only while the intervals overlap
            if (i + 1 < qs.size() && ci(cell[i + 1][j]).hi < ci(cell[i][j]).lo) ++reversals;
            if (j + 1 < zs.size() && ci(cell[i][j + 1]).lo > ci(cell[i][j]).hi) ++reversals;
        }
    }
    for (std::size_t i = 0; i < qs.size(); ++i) {
        std::vector<double> rates;
        for (const auto& o : cell[i]) rates.push_back(o.success_rate);
        bad_slopes += slope(zs, rates) < 0 ? 0 : 1;
    }
    for (std::size_t j = 0; j < zs.size(); ++j) {
        std::vector<double> rates;
        for (std::size_t i = 0; i < qs.size(); ++i) rates.push_back(cell[i][j].success_rate);
        bad_slopes += slope(qs, rates) > 0 ? 0 : 1;
    }

    std::string table;
    for (std::size_t i = 0; i < qs.size(); ++i) {
        table += fmt(" q=%.1f:", qs[i]);
        for (const auto& o : cell[i]) table += fmt(" %.4f", o.success_rate);
        table += ";";
    }
    return {reversals == 0 && bad_slopes == 0,
            fmt("%llu trials per cell, z = 1 2 4 6;", (unsigned long long)trials) + table +
                fmt(" disjoint reversals %d, wrong-sign slopes %d", reversals, bad_slopes)};
}

// ---------------------------------------------------------------------------
// 6. Waiting time to six confirmations

Verdict confirmation_latency()
{
    SimConfig cfg;
    cfg.rng_seed = 66;
    cfg.node_count = 1;
    cfg.miners = {{0, 1.0}};
    cfg.mean_block_interval = 600.0;
    cfg.workload.tx_rate = 1.0 / 1200.0;
    cfg.workload.addresses_per_node = 64;
    cfg.workload.genesis_funding = Amount::coins(100).units();
    cfg.duration = 6e6;
    EventTrace trace = run_simulation(cfg);

    SummaryOptions opts;
    opts.max_confirmations = 6;
    opts.tx_cutoff = cfg.duration - 30'000.0;
    Summary s = summarize(trace, opts);
    const ConfirmationSummary& k6 = s.confirmations.at(5);

    const double expected = boost::math::mean(boost::math::gamma_distribution<>(6.0, cfg.mean_block_interval));
    const double error = (k6.mean - expected) / expected;
    const bool pass = k6.k == 6 && k6.count >= 1000 && k6.censored == 0 && s.tx_skipped == 0 &&
                      std::abs(error) <= 0.05;
    return {pass, fmt("k=6 mean wait %.1f s over %zu txs (censored %zu, skipped %llu) vs Erlang mean %.0f s: "
                      "%+.2f%% (limit 5%%)",
                      k6.mean, k6.count, k6.censored, (unsigned long long)s.tx_skipped, expected, 100 * error)};
}

// ---------------------------------------------------------------------------
// 7. Clustering equals connected components

Verdict clustering_oracle()
{
    std::mt19937_64 rng(7007);
    int mismatches = 0;
    std::size_t largest = 0, addresses_seen = 0;
    for (int instance = 0; instance < 200; ++instance) {
        const std::size_t n = 2 + rng() % 999;
        std::vector<Address> pool;
        for (std::size_t i = 0; i < n; ++i) pool.push_back(Address{sha256("a" + std::to_string(rng()))});
        std::uniform_int_distribution<std::size_t> pick(0, n - 1), arity(1, 4);
        const std::size_t m = rng() % (3 * n / 2 + 1);

        TxGraph graph;
        graph.addresses.insert(pool.begin(), pool.end());
        std::vector<std::vector<Address>> sets;
        for (std::size_t t = 0; t < m; ++t) {
            TxNode node;
            node.id = sha256("tx" + std::to_string(instance) + "/" + std::to_string(t));
            node.coinbase = t % 17 == 0;
            std::vector<Address> inputs;
            if (!node.coinbase) {
                for (std::size_t k = arity(rng); k > 0; --k) {
                    const Address& a = pool[pick(rng)];
                    node.spends.push_back(TxOutput{a, Amount(1)});
                    inputs.push_back(a);
                }
                sets.push_back(inputs);
            }
            node.outputs.push_back(TxOutput{pool[pick(rng)], Amount(1)});
            graph.index[node.id] = graph.txs.size();
            graph.txs.push_back(std::move(node));
        }
        const ClusterSet got = cluster_addresses(graph);
        const auto expected = testing::co_input_components(graph.addresses, sets);
        mismatches += got.cluster_of == expected ? 0 : 1;
        for (const auto& [_, members] : got.clusters()) largest = std::max(largest, members.size());
        addresses_seen += n;
    }
    return {mismatches == 0, fmt("200 instances, %zu addresses in total, largest cluster %zu; mismatches %d",
                                 addresses_seen, largest, mismatches)};
}

// ---------------------------------------------------------------------------
// 8. First-relayer source inference

Verdict first_relayer()
{
    SimConfig cfg;
    cfg.rng_seed = 88;
    cfg.node_count = 20;
    cfg.topology = {TopologyKind::Random, 0.25};
    cfg.latency = {LatencyModel::Kind::Uniform, 10.0, 100.0};
    cfg.miners = {{0, 0.2}, {5, 0.3}, {12, 0.5}};
    cfg.workload.tx_rate = 0.05;
    cfg.workload.addresses_per_node = 8;
    cfg.workload.genesis_funding = Amount::coins(5).units();
    cfg.duration = 30'000.0;
    cfg.spy = true;
    EventTrace trace = run_simulation(cfg);
    DeanonReport report = first_relayer_attack(trace);

    // recompute the guesses straight from the records
    const int32_t spy = *trace.spy_node;
    std::map<Hash256, int32_t> source, first_to_spy;
    for (const auto& r : trace.records) {
        if (r.kind == EventKind::TxArrival && r.status == "accepted") source.emplace(r.object, r.node);
        if (r.kind == EventKind::TxRelay && r.node == spy) first_to_spy.emplace(r.object, r.from);
    }
    std::size_t disagreements = 0, correct = 0, n = 0;
    for (const auto& g : report.guesses) {
        auto it = first_to_spy.find(g.tx);
        if (it == first_to_spy.end() || it->second != g.guess || source.at(g.tx) != g.truth) ++disagreements;
        correct += g.guess == g.truth ? 1 : 0;
        ++n;
    }
    disagreements += first_to_spy.size() == n ? 0 : 1;

    const double acc = n ? double(correct) / double(n) : 0.0;
    const double baseline = 1.0 / double(cfg.node_count);
    const double sigma = std::sqrt(acc * (1 - acc) / double(std::max<std::size_t>(n, 1)));
    const bool pass = n >= 1000 && disagreements == 0 && acc - 3 * sigma > 3 * baseline;
    return {pass, fmt("%zu txs, accuracy %.4f (3 sigma lower bound %.4f) vs 3 x baseline %.3f; "
                      "report/records disagreements %zu",
                      n, acc, acc - 3 * sigma, 3 * baseline, disagreements)};
}

// ---------------------------------------------------------------------------
// 9. Byte-identical traces

std::string trace_bytes(const SimConfig& cfg)
{
    std::ostringstream out;
    run_simulation(cfg).write_jsonl(out);
    return out.str();
}

SimConfig random_config(uint64_t seed)
{
    Rng rng(seed);
    SimConfig cfg;
    cfg.rng_seed = seed;
    cfg.node_count = uint32_t(2 + rng.below(10));
    cfg.topology.kind = static_cast<TopologyKind>(rng.below(4));
    cfg.topology.p = 0.3;
    cfg.latency = {LatencyModel::Kind::Uniform, 5.0, 5.0 + rng.uniform(0, 3000)};
    const uint32_t miners = uint32_t(1 + rng.below(cfg.node_count));
    for (uint32_t i = 0; i < miners; ++i) cfg.miners.push_back({i, 0.9 / miners});
    cfg.workload.tx_rate = rng.uniform(0, 0.05);
    cfg.workload.genesis_funding = Amount::coins(2).units();
    cfg.retarget.enabled = rng.bernoulli(0.5);
    cfg.retarget.window = 8;
    cfg.hashrate_schedule = {{20'000.0, 2.0}};
    cfg.duration = 40'000.0;
    cfg.spy = rng.bernoulli(0.5);
    return cfg;
}

Verdict determinism()
{
    std::vector<std::pair<std::string, SimConfig>> runs;
    for (const char* name : {"minimal.json", "network.json"}) {
        runs.emplace_back(name, load_scenario(std::filesystem::path(BLOCKSIM_SCENARIO_DIR) / name).sim);
    }
    for (uint64_t s = 1; s <= 8; ++s) runs.emplace_back("random#" + std::to_string(s), random_config(s * 7919));

    std::size_t differing = 0, bytes = 0;
    std::string which;
    for (const auto& [name, cfg] : runs) {
        const std::string first = trace_bytes(cfg);
        if (first != trace_bytes(cfg)) {
            ++differing;
            which += " " + name;
        }
        bytes += first.size();
    }

    // attack trials must not depend on the number of workers
    AttackSpec spec = load_scenario(std::filesystem::path(BLOCKSIM_SCENARIO_DIR) / "double_spend.json").attack.value();
    spec.trials = 500;
    spec.jobs = 1;
    const AttackOutcome serial = run_attack(spec);
    spec.jobs = 4;
    const AttackOutcome parallel = run_attack(spec);
    bool attack_same = serial.success_count == parallel.success_count;
    for (std::size_t i = 0; i < serial.trials.size() && attack_same; ++i) {
        const auto& x = serial.trials[i];
        const auto& y = parallel.trials[i];
        attack_same = x.success == y.success && x.honest_blocks == y.honest_blocks &&
                      x.attacker_blocks == y.attacker_blocks && x.time == y.time;
    }
    return {differing == 0 && attack_same,
            fmt("%zu scenarios run twice (%.1f MB of trace), differing %zu;", runs.size(), bytes / 1e6, differing) +
                which + (attack_same ? " attack trials identical for 1 and 4 workers" : " attack trials differ")};
}

// ---------------------------------------------------------------------------
// 10. Proof of work

Verdict proof_of_work()
{
    ChainParams params;
    params.scheme = std::make_shared<SimulatedScheme>();
    params.genesis_target = pow2_target(248);
    params.pow = PowMode::Verify;
    ChainStore store(params);
    const Address payee = derive_address(params.scheme->generate_keypair(10).public_key);

    std::mt19937_64 rng(1010);
    std::vector<uint64_t> attempts;
    std::size_t rejected = 0, failed_pow = 0, gave_up = 0;
    for (int i = 0; i < 1000; ++i) {
        const Hash256 tip = store.best_tip();
        const uint64_t h = store.best_height() + 1;
        Block draft = make_block(tip, h, store.next_target(tip), 600.0 * h,
                                 make_tx_ref(Transaction::coinbase(h, {TxOutput{payee, block_reward(h, params.reward)}})),
                                 {});
        MineResult mined = mine_block(draft, uint64_t(1) << 24, rng);
        if (!mined.block) {
            ++gave_up;
            continue;
        }
        attempts.push_back(mined.attempts);
        failed_pow += check_pow(mined.block->header) ? 0 : 1;
        rejected += store.connect_block(*mined.block).kind == ConnectKind::ExtendedBest ? 0 : 1;
    }

    // the same block with an unlucky nonce is refused
    Block forged = *store.find(store.best_tip())->block;
    forged.header.parent_id = store.best_tip();
    forged.header.height = store.best_height() + 1;
    forged.coinbase = make_tx_ref(Transaction::coinbase(forged.header.height, {}));
    forged.header.tx_commitment = compute_tx_commitment(*forged.coinbase, forged.txs);
    while (check_pow(forged.header)) ++forged.header.nonce;
    const bool forged_refused = store.validate_block(forged).error == BlockError::BadPow;

    // chi-squared against the geometric law of attempts, ten bins of equal probability
    const double p = target_probability(params.genesis_target);
    auto cdf = [&](double a) { return 1.0 - std::pow(1.0 - p, a); };
    std::vector<double> edges;
    for (int j = 1; j < 10; ++j) edges.push_back(std::ceil(std::log(1.0 - j / 10.0) / std::log(1.0 - p)));
    std::vector<double> observed(10, 0.0);
    for (uint64_t a : attempts) {
        observed[std::upper_bound(edges.begin(), edges.end(), double(a) - 0.5) - edges.begin()] += 1;
    }
    double chi2 = 0.0, previous = 0.0;
    const double n = double(attempts.size());
    for (int j = 0; j < 10; ++j) {
        const double upper = j < 9 ? cdf(edges[j]) : 1.0;
        const double expected = n * (upper - previous);
        chi2 += (observed[j] - expected) * (observed[j] - expected) / expected;
        previous = upper;
    }
    const double pvalue = boost::math::cdf(boost::math::complement(boost::math::chi_squared(9.0), chi2));
    double mean = 0;
    for (uint64_t a : attempts) mean += double(a);
    mean /= n;

    const bool pass = attempts.size() == 1000 && gave_up == 0 && failed_pow == 0 && rejected == 0 &&
                      forged_refused && pvalue > 0.01;
    return {pass, fmt("%zu blocks mined at target 2^248 and accepted (rejected %zu, bad pow %zu); unmined nonce "
                      "%s; mean attempts %.1f vs %.0f; chi2 = %.2f on 9 df, p = %.3f (need > 0.01)",
                      attempts.size(), rejected, failed_pow, forged_refused ? "refused" : "ACCEPTED", mean, 1.0 / p,
                      chi2, pvalue)};
}

struct Criterion {
    int number;
    const char* name;
    std::function<Verdict()> run;
};

} // namespace

int main(int argc, char** argv)
{
    const std::vector<Criterion> criteria{
        {1, "conservation", conservation},
        {2, "fork-choice order independence", fork_choice_order},
        {3, "hashrate proportionality", hashrate_share},
        {4, "majority attack", majority_attack},
        {5, "double-spend monotonicity", double_spend_grid},
        {6, "confirmation latency", confirmation_latency},
        {7, "clustering oracle", clustering_oracle},
        {8, "first-relayer attack", first_relayer},
        {9, "determinism", determinism},
        {10, "proof of work", proof_of_work},
    };
    std::set<int> wanted;
    for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));

    int failed = 0;
    for (const auto& c : criteria) {
        if (!wanted.empty() && !wanted.count(c.number)) continue;
        const auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = c.run();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        failed += v.pass ? 0 : 1;
        std::cout << (v.pass ? "PASS" : "FAIL") << " [" << c.number << "] " << c.name << " ("
                  << fmt("%.1f s", seconds_since(start)) << "): " << v.detail << std::endl;
    }
    return failed == 0 ? 0 : 1;
}
