#include <blocksim/netsim/simulation.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace blocksim {

uint256 network_genesis_target()
{
    return pow2_target(240);
}

Simulation::Simulation(SimConfig config) : config_(std::move(config)), rng_(config_.rng_seed)
{
    validate_config(config_);
    scheme_ = make_signature_scheme(config_.signature_scheme);

    chain_params_.scheme = scheme_;
    chain_params_.genesis_target = network_genesis_target();
    chain_params_.reward = config_.reward;
    chain_params_.retarget = config_.retarget;
    chain_params_.max_block_txs = config_.block_capacity;
    chain_params_.orphan_limit = config_.orphan_limit;
    chain_params_.pow = PowMode::Simulated;

    // Wallet keys depend only on the seed and the (node, slot) position.
    std::vector<std::vector<KeyPair>> wallets(config_.node_count);
    for (uint32_t n = 0; n < config_.node_count; ++n) {
        for (uint32_t i = 0; i < config_.workload.addresses_per_node; ++i) {
            wallets[n].push_back(scheme_->generate_keypair(derive_seed(config_.rng_seed, (uint64_t{n} << 32) | i)));
            if (config_.workload.genesis_funding > 0) {
                chain_params_.genesis_outputs.push_back(
                    TxOutput{derive_address(wallets[n].back().public_key), Amount(config_.workload.genesis_funding)});
            }
        }
    }

    ChainStore genesis_store(chain_params_);
    const uint32_t total = config_.node_count + (config_.spy ? 1 : 0);
    nodes_.reserve(total);
    for (uint32_t n = 0; n < total; ++n) {
        NodeState state{n, false, genesis_store, Mempool{}, {}, {}, {}, {}, {}};
        if (n < config_.node_count) {
            state.keys = std::move(wallets[n]);
            for (std::size_t i = 0; i < state.keys.size(); ++i) {
                state.key_index.emplace(derive_address(state.keys[i].public_key), i);
            }
        } else {
            state.spy = true;
            spy_ = n;
        }
        nodes_.push_back(std::move(state));
    }
    build_topology();

    trace_.config = config_to_json(config_);
    trace_.sig_scheme = std::string(scheme_->name());
    trace_.node_count = config_.node_count;
    if (spy_) trace_.spy_node = static_cast<int32_t>(*spy_);

    for (const auto& m : config_.miners) miners_[m.node].share = m.share;
    for (const auto& [node, _] : miners_) reschedule_miner(node);
    schedule_next_workload();
    for (const auto& change : config_.hashrate_schedule) {
        Pending ev;
        ev.time = change.time;
        ev.kind = EventKind::Scheduled;
        ev.multiplier = change.multiplier;
        schedule(ev);
    }
}

void Simulation::build_topology()
{
    const uint32_t n = config_.node_count;
    auto link = [&](uint32_t a, uint32_t b) {
        if (a == b) return;
        auto& pa = nodes_[a].peers;
        if (std::find(pa.begin(), pa.end(), b) != pa.end()) return;
        pa.push_back(b);
        nodes_[b].peers.push_back(a);
    };
    switch (config_.topology.kind) {
    case TopologyKind::Complete:
        for (uint32_t a = 0; a < n; ++a)
            for (uint32_t b = a + 1; b < n; ++b) link(a, b);
        break;
    case TopologyKind::Random:
        for (uint32_t a = 0; a < n; ++a)
            for (uint32_t b = a + 1; b < n; ++b)
                if (rng_.bernoulli(config_.topology.p)) link(a, b);
        break;
    case TopologyKind::Ring:
        for (uint32_t a = 0; a + 1 < n; ++a) link(a, a + 1);
        if (n > 2) link(n - 1, 0);
        break;
    case TopologyKind::Star:
        for (uint32_t a = 1; a < n; ++a) link(0, a);
        break;
    }
    if (spy_) {
        for (uint32_t a = 0; a < n; ++a) link(a, *spy_);
    }
}

void Simulation::schedule(Pending ev)
{
    ev.seq = next_seq_++;
    queue_.push(std::move(ev));
}

void Simulation::broadcast_transaction(uint32_t node, TransactionRef tx, double time)
{
    Pending ev;
    ev.time = time;
    ev.kind = EventKind::TxArrival;
    ev.node = node;
    ev.tx = std::move(tx);
    schedule(ev);
}

void Simulation::schedule_block_found(uint32_t node, double time)
{
    Pending ev;
    ev.time = time;
    ev.kind = EventKind::BlockFound;
    ev.node = node;
    ev.forced = true;
    schedule(ev);
}

bool Simulation::generation_stopped() const
{
    return config_.max_blocks > 0 && blocks_found_ >= config_.max_blocks;
}

void Simulation::run_until(double until)
{
    while (!queue_.empty() && queue_.top().time <= until) {
        Pending ev = queue_.top();
        queue_.pop();
        now_ = ev.time;
        process(ev);
    }
}

void Simulation::drain()
{
    while (!queue_.empty()) {
        Pending ev = queue_.top();
        queue_.pop();
        if (ev.kind != EventKind::TxRelay && ev.kind != EventKind::BlockRelay) continue;
        now_ = ev.time;
        process(ev);
    }
    trace_.final_tips.clear();
    for (const auto& n : nodes_) {
        if (n.spy) continue;
        trace_.final_tips.push_back(NodeTip{static_cast<int32_t>(n.id), n.chain.best_tip(), n.chain.best_height()});
    }
}

EventTrace Simulation::run()
{
    run_until(config_.duration);
    drain();
    return trace_;
}

void Simulation::process(const Pending& ev)
{
    switch (ev.kind) {
    case EventKind::TxArrival: on_tx_arrival(ev); break;
    case EventKind::TxRelay: on_tx_relay(ev); break;
    case EventKind::BlockFound: on_block_found(ev); break;
    case EventKind::BlockRelay: on_block_relay(ev); break;
    case EventKind::Scheduled: on_schedule(ev); break;
    }
}

void Simulation::schedule_next_workload()
{
    if (config_.workload.tx_rate <= 0.0) return;
    Pending ev;
    ev.time = now_ + rng_.exponential(1.0 / config_.workload.tx_rate);
    ev.kind = EventKind::TxArrival;
    ev.node = static_cast<uint32_t>(rng_.below(config_.node_count));
    ev.workload = true;
    schedule(ev);
}

void Simulation::reschedule_miner(uint32_t node)
{
    MinerClock& clock = miners_.at(node);
    ++clock.generation;
    const ChainStore& chain = nodes_[node].chain;
    double difficulty_scale = chain.next_target(chain.best_tip()).convert_to<double>() /
                              chain_params_.genesis_target.convert_to<double>();
    double rate = clock.share * hashrate_multiplier_ / config_.mean_block_interval * difficulty_scale;
    if (!(rate > 0.0)) return;

    Pending ev;
    ev.time = now_ + rng_.exponential(1.0 / rate);
    ev.kind = EventKind::BlockFound;
    ev.node = node;
    ev.generation = clock.generation;
    schedule(ev);
}

void Simulation::relay_tx(uint32_t node, int32_t except, const TransactionRef& tx)
{
    for (uint32_t peer : nodes_[node].peers) {
        if (static_cast<int32_t>(peer) == except) continue;
        Pending ev;
        ev.time = now_ + config_.latency.sample_seconds(rng_);
        ev.kind = EventKind::TxRelay;
        ev.node = peer;
        ev.from = static_cast<int32_t>(node);
        ev.tx = tx;
        schedule(ev);
    }
}

void Simulation::relay_block(uint32_t node, int32_t except, const BlockRef& block)
{
    for (uint32_t peer : nodes_[node].peers) {
        if (static_cast<int32_t>(peer) == except || nodes_[peer].spy) continue;
        Pending ev;
        ev.time = now_ + config_.latency.sample_seconds(rng_);
        ev.kind = EventKind::BlockRelay;
        ev.node = peer;
        ev.from = static_cast<int32_t>(node);
        ev.block = block;
        schedule(ev);
    }
}

void Simulation::on_tx_arrival(const Pending& ev)
{
    if (ev.workload && generation_stopped()) return;

    NodeState& n = nodes_[ev.node];
    TraceRecord rec;
    rec.time = ev.time;
    rec.seq = ev.seq;
    rec.kind = EventKind::TxArrival;
    rec.node = static_cast<int32_t>(ev.node);

    TransactionRef tx = ev.tx ? ev.tx : make_workload_tx(ev.node);
    if (!tx) {
        rec.status = "skipped";
    } else {
        rec.object = tx->id();
        n.seen_txs.insert(tx->id());
        auto res = n.mempool.add(tx, n.chain.best_utxo(), *scheme_);
        rec.status = res == Mempool::AddResult::Accepted ? "accepted" : "rejected";
        if (res == Mempool::AddResult::Accepted) relay_tx(ev.node, -1, tx);
    }
    trace_.records.push_back(std::move(rec));
    if (ev.workload) schedule_next_workload();
}

void Simulation::on_tx_relay(const Pending& ev)
{
    NodeState& n = nodes_[ev.node];
    TraceRecord rec;
    rec.time = ev.time;
    rec.seq = ev.seq;
    rec.kind = EventKind::TxRelay;
    rec.node = static_cast<int32_t>(ev.node);
    rec.from = ev.from;
    rec.object = ev.tx->id();

    if (!n.seen_txs.insert(ev.tx->id()).second) {
        rec.status = "duplicate";
    } else if (n.spy) {
        rec.status = "new";
    } else if (n.mempool.add(ev.tx, n.chain.best_utxo(), *scheme_) == Mempool::AddResult::Accepted) {
        rec.status = "new";
        relay_tx(ev.node, ev.from, ev.tx);
    } else {
        rec.status = "rejected";
    }
    trace_.records.push_back(std::move(rec));
}

Block Simulation::make_template(uint32_t node) const
{
    const NodeState& n = nodes_[node];
    const ChainStore& chain = n.chain;
    const uint64_t height = chain.best_height() + 1;
    std::vector<TransactionRef> txs = n.mempool.select(config_.block_capacity);
    Amount claim = block_reward(height, config_.reward);
    for (const auto& tx : txs) claim += n.mempool.fee_of(tx->id());

    std::vector<TxOutput> outs;
    if (claim.units() > 0) {
        Address payee = n.keys.empty() ? Address{sha256("blocksim/burn")}
                                       : derive_address(n.keys[height % n.keys.size()].public_key);
        outs.push_back(TxOutput{payee, claim});
    }
    return make_block(chain.best_tip(), height, chain.next_target(chain.best_tip()), now_,
                      make_tx_ref(Transaction::coinbase(height, std::move(outs))), std::move(txs));
}

TraceRecord Simulation::block_record(const Pending& ev, const NodeState& n, const Hash256& id,
                                     const ConnectOutcome& outcome) const
{
    TraceRecord rec;
    rec.time = ev.time;
    rec.seq = ev.seq;
    rec.kind = ev.kind;
    rec.node = static_cast<int32_t>(ev.node);
    rec.from = ev.from;
    rec.object = id;
    rec.status = std::string(to_string(outcome.kind));
    rec.tip = n.chain.best_tip();
    rec.tip_height = n.chain.best_height();
    rec.reorg_depth = static_cast<uint32_t>(outcome.reorg_depth());
    return rec;
}

void Simulation::on_block_found(const Pending& ev)
{
    if (!ev.forced) {
        if (generation_stopped()) return;
        auto it = miners_.find(ev.node);
        if (it == miners_.end() || it->second.generation != ev.generation) return;
    }
    NodeState& n = nodes_[ev.node];
    if (n.spy) return;

    auto block = std::make_shared<const Block>(make_template(ev.node));
    ++blocks_found_;
    const Hash256 id = block->id();
    n.seen_blocks.insert(id);
    ConnectOutcome outcome = n.chain.connect_block(block);

    TraceRecord rec = block_record(ev, n, id, outcome);
    rec.parent = block->header.parent_id;
    rec.height = block->header.height;
    for (const auto& tx : block->txs) rec.txids.push_back(tx->id());
    trace_.records.push_back(std::move(rec));

    after_connect(ev.node, outcome);
    if (outcome.kind != ConnectKind::Invalid) relay_block(ev.node, -1, block);
}

void Simulation::on_block_relay(const Pending& ev)
{
    NodeState& n = nodes_[ev.node];
    const Hash256 id = ev.block->id();
    if (!n.seen_blocks.insert(id).second) {
        ConnectOutcome dup;
        dup.kind = ConnectKind::Duplicate;
        trace_.records.push_back(block_record(ev, n, id, dup));
        return;
    }
    ConnectOutcome outcome = n.chain.connect_block(ev.block);
    trace_.records.push_back(block_record(ev, n, id, outcome));
    after_connect(ev.node, outcome);
    if (outcome.kind != ConnectKind::Invalid) relay_block(ev.node, ev.from, ev.block);
}

void Simulation::on_schedule(const Pending& ev)
{
    hashrate_multiplier_ = ev.multiplier;
    TraceRecord rec;
    rec.time = ev.time;
    rec.seq = ev.seq;
    rec.kind = EventKind::Scheduled;
    rec.multiplier = ev.multiplier;
    trace_.records.push_back(std::move(rec));
    for (const auto& [node, _] : miners_) reschedule_miner(node);
}

void Simulation::after_connect(uint32_t node, const ConnectOutcome& outcome)
{
    if (!outcome.tip_changed()) return;
    NodeState& n = nodes_[node];
    if (outcome.disconnected.empty()) {
        for (const auto& id : outcome.connected) n.mempool.remove_for_block(*n.chain.find(id)->block);
    } else {
        n.mempool.resync(n.chain.best_utxo(), *scheme_, outcome.unconfirmed);
    }
    if (miners_.count(node)) reschedule_miner(node);
}

TransactionRef Simulation::make_workload_tx(uint32_t node)
{
    NodeState& n = nodes_[node];
    const Workload& w = config_.workload;
    const UtxoSet& utxo = n.chain.best_utxo();

    std::vector<std::pair<OutPoint, std::size_t>> spendable;
    for (const auto& [addr, key] : n.key_index) {
        for (const auto& op : utxo.owned_by(addr)) {
            if (!n.mempool.spends(op)) spendable.emplace_back(op, key);
        }
    }
    if (spendable.empty()) return nullptr;

    const std::size_t k = 1 + rng_.below(std::min<std::size_t>(w.max_inputs, spendable.size()));
    for (std::size_t i = 0; i < k; ++i) {
        std::swap(spendable[i], spendable[i + rng_.below(spendable.size() - i)]);
    }
    spendable.resize(k);

    std::vector<TxInput> inputs;
    std::vector<KeyPair> signers;
    Amount total;
    for (const auto& [op, key] : spendable) {
        inputs.push_back(TxInput{op, {}, {}});
        signers.push_back(n.keys[key]);
        total += utxo.find(op)->amount;
    }
    const int64_t fee = w.fee_min + static_cast<int64_t>(rng_.below(static_cast<uint64_t>(w.fee_max - w.fee_min) + 1));
    if (total.units() <= fee) return nullptr;
    const int64_t spendable_value = total.units() - fee;
    const double fraction = rng_.uniform(w.pay_fraction_min, w.pay_fraction_max);
    const int64_t pay = std::clamp<int64_t>(static_cast<int64_t>(std::floor(spendable_value * fraction)), 1,
                                            spendable_value);

    uint32_t payee_node = node;
    if (config_.node_count > 1) {
        payee_node = static_cast<uint32_t>(rng_.below(config_.node_count - 1));
        if (payee_node >= node) ++payee_node;
    }
    const auto& payee_keys = nodes_[payee_node].keys;
    std::vector<TxOutput> outputs{
        TxOutput{derive_address(payee_keys[rng_.below(payee_keys.size())].public_key), Amount(pay)}};
    if (spendable_value - pay > 0) {
        outputs.push_back(
            TxOutput{derive_address(n.keys[rng_.below(n.keys.size())].public_key), Amount(spendable_value - pay)});
    }
    return make_tx_ref(
        sign_transaction(Transaction::spend(std::move(inputs), std::move(outputs)), signers, utxo, *scheme_));
}

EventTrace run_simulation(const SimConfig& config)
{
    Simulation sim(config);
    return sim.run();
}

} // namespace blocksim
