#include <blocksim/adversary/attack.hpp>

#include <blocksim/chainstore.hpp>
#include <blocksim/netsim/json_fields.hpp>
#include <blocksim/netsim/random.hpp>
#include <blocksim/netsim/simulation.hpp>

#include <atomic>
#include <cmath>
#include <thread>

namespace blocksim {

std::string_view to_string(AttackKind k)
{
    return k == AttackKind::DoubleSpend ? "double_spend" : "majority_overtake";
}

void validate_attack(const AttackSpec& spec)
{
    auto require = [](bool cond, const char* key, const std::string& msg) {
        if (!cond) throw ConfigError(key, msg);
    };
    require(spec.attacker_share >= 0.0 && spec.attacker_share < 1.0, "attack.q", "attacker share must lie in [0, 1)");
    require(spec.kind == AttackKind::MajorityOvertake || spec.confirmations >= 1, "attack.z",
            "a double spend needs at least one confirmation");
    require(spec.publish_lead >= 1, "attack.publish_lead", "must be at least 1");
    require(spec.trials >= 1, "attack.trials", "must be at least 1");
    require(spec.horizon >= 1, "attack.horizon", "must be at least 1");
    require(spec.base.mean_block_interval > 0.0, "mean_block_interval", "must be positive");
    require(spec.base.signature_scheme == "simulated" || spec.base.signature_scheme == "ed25519", "signature_scheme",
            "expected 'simulated' or 'ed25519'");
}

namespace {

/// Everything trials share: keys, the funded genesis state and the two conflicting spends.
struct RaceFixture {
    ChainParams params;
    Address honest_payee;
    Address attacker_payee;
    TransactionRef payment;
    TransactionRef conflict;
    Amount payment_fee;
    Amount conflict_fee;
    std::optional<ChainStore> genesis;

    explicit RaceFixture(const SimConfig& base)
    {
        auto scheme = make_signature_scheme(base.signature_scheme);
        const uint64_t seed = base.rng_seed;
        KeyPair attacker = scheme->generate_keypair(derive_seed(seed, 1ull << 40));
        KeyPair stash = scheme->generate_keypair(derive_seed(seed, (1ull << 40) + 1));
        KeyPair merchant = scheme->generate_keypair(derive_seed(seed, (1ull << 40) + 2));
        KeyPair honest_miner = scheme->generate_keypair(derive_seed(seed, (1ull << 40) + 3));
        const Address from = derive_address(attacker.public_key);
        honest_payee = derive_address(honest_miner.public_key);
        attacker_payee = derive_address(stash.public_key);

        params.scheme = scheme;
        params.genesis_target = network_genesis_target();
        params.reward = base.reward;
        params.max_block_txs = base.block_capacity;
        params.orphan_limit = 0;
        params.pow = PowMode::Simulated;
        const Amount funds = Amount::coins(100);
        params.genesis_outputs = {TxOutput{from, funds}};
        genesis.emplace(params);

        const UtxoSet& utxo = genesis->best_utxo();
        const OutPoint coin = *utxo.owned_by(from).begin();
        payment_fee = Amount(10'000);
        conflict_fee = Amount(10'000);
        Transaction pay = Transaction::spend(
            {TxInput{coin, {}, {}}},
            {TxOutput{derive_address(merchant.public_key), Amount::coins(10)},
             TxOutput{from, funds - Amount::coins(10) - payment_fee}});
        Transaction back = Transaction::spend({TxInput{coin, {}, {}}}, {TxOutput{attacker_payee, funds - conflict_fee}});
        payment = make_tx_ref(sign_transaction(pay, std::vector<KeyPair>{attacker}, utxo, *scheme));
        conflict = make_tx_ref(sign_transaction(back, std::vector<KeyPair>{attacker}, utxo, *scheme));
    }

    BlockRef extend(const ChainStore& store, const TransactionRef& tx, Amount fee, const Address& payee,
                    double time) const
    {
        const Hash256& parent = store.best_tip();
        const uint64_t height = store.best_height() + 1;
        std::vector<TransactionRef> txs;
        Amount claim = block_reward(height, params.reward);
        if (tx) {
            txs.push_back(tx);
            claim += fee;
        }
        std::vector<TxOutput> outs;
        if (claim.units() > 0) outs.push_back(TxOutput{payee, claim});
        return std::make_shared<const Block>(make_block(parent, height, store.next_target(parent), time,
                                                        make_tx_ref(Transaction::coinbase(height, std::move(outs))),
                                                        std::move(txs)));
    }
};

TrialRecord race(const RaceFixture& fx, const AttackSpec& spec, uint64_t index)
{
    Rng rng(derive_seed(spec.base.rng_seed, index));
    ChainStore merchant = *fx.genesis;
    ChainStore attacker = *fx.genesis;
    std::vector<BlockRef> hidden;
    TrialRecord rec;
    rec.index = index;
    double now = 0.0;

    auto honest_block = [&] {
        const bool first = rec.honest_blocks == 0;
        merchant.connect_block(fx.extend(merchant, first ? fx.payment : nullptr, fx.payment_fee, fx.honest_payee, now));
        ++rec.honest_blocks;
    };
    auto attacker_block = [&] {
        const bool first = rec.attacker_blocks == 0;
        hidden.push_back(fx.extend(attacker, first ? fx.conflict : nullptr, fx.conflict_fee, fx.attacker_payee, now));
        attacker.connect_block(hidden.back());
        ++rec.attacker_blocks;
    };

    const bool double_spend = spec.kind == AttackKind::DoubleSpend;
    if (!double_spend) {
        for (uint32_t i = 0; i < spec.confirmations; ++i) honest_block();
    }
    for (uint32_t i = 0; i < spec.premine_lead; ++i) attacker_block();
    const uint64_t accept_at = double_spend ? spec.confirmations : 0;

    auto lead = [&] { return static_cast<int64_t>(rec.attacker_blocks) - static_cast<int64_t>(rec.honest_blocks); };
    const double total_rate = 1.0 / spec.base.mean_block_interval;
    for (;;) {
        const bool accepted = merchant.confirmations(fx.payment->id()) >= accept_at;
        if (accepted && lead() >= static_cast<int64_t>(spec.publish_lead)) {
            for (const auto& b : hidden) {
                ConnectOutcome out = merchant.connect_block(b);
                rec.reorg_depth = std::max<uint64_t>(rec.reorg_depth, out.reorg_depth());
            }
            rec.success =
                merchant.confirmations(fx.conflict->id()) > 0 && merchant.confirmations(fx.payment->id()) == 0;
            break;
        }
        if (-lead() >= static_cast<int64_t>(spec.horizon)) break;

        now += rng.exponential(1.0 / total_rate);
        if (rng.bernoulli(spec.attacker_share)) {
            attacker_block();
        } else {
            honest_block();
        }
    }
    rec.time = now;
    return rec;
}

} // namespace

TrialRecord run_trial(const AttackSpec& spec, uint64_t index)
{
    validate_attack(spec);
    RaceFixture fx(spec.base);
    return race(fx, spec, index);
}

AttackOutcome run_attack(const AttackSpec& spec)
{
    validate_attack(spec);
    const RaceFixture fx(spec.base);
    AttackOutcome out;
    out.spec = spec;
    out.trial_count = spec.trials;
    out.trials.resize(spec.trials);

    std::atomic<uint64_t> next{0};
    auto worker = [&] {
        for (uint64_t i = next++; i < spec.trials; i = next++) out.trials[i] = race(fx, spec, i);
    };
    const uint32_t jobs = std::max<uint32_t>(1, std::min<uint64_t>(spec.jobs, spec.trials));
    std::vector<std::thread> pool;
    for (uint32_t j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    double blocks = 0.0, time = 0.0;
    for (const auto& t : out.trials) {
        if (!t.success) continue;
        ++out.success_count;
        blocks += double(t.honest_blocks + t.attacker_blocks);
        time += t.time;
    }
    out.success_rate = double(out.success_count) / double(out.trial_count);
    if (out.success_count > 0) {
        out.mean_blocks_to_success = blocks / double(out.success_count);
        out.mean_time_to_success = time / double(out.success_count);
    }
    return out;
}

AttackOutcome run_double_spend(const AttackSpec& spec)
{
    if (spec.kind != AttackKind::DoubleSpend) throw std::invalid_argument("run_double_spend: wrong attack kind");
    return run_attack(spec);
}

AttackOutcome run_majority_overtake(const AttackSpec& spec)
{
    if (spec.kind != AttackKind::MajorityOvertake) {
        throw std::invalid_argument("run_majority_overtake: wrong attack kind");
    }
    if (spec.attacker_share <= 0.0) throw ConfigError("attack.q", "overtaking needs a positive attacker share");
    return run_attack(spec);
}

nlohmann::json attack_to_json(const AttackSpec& spec)
{
    return {{"kind", std::string(to_string(spec.kind))}, {"q", spec.attacker_share},
            {"z", spec.confirmations},                   {"premine_lead", spec.premine_lead},
            {"publish_lead", spec.publish_lead},         {"trials", spec.trials},
            {"horizon", spec.horizon}};
}

AttackSpec attack_from_json(const nlohmann::json& j, const SimConfig& base)
{
    AttackSpec spec;
    spec.base = base;
    JsonFields f(j, "attack", {"kind", "q", "z", "premine_lead", "publish_lead", "trials", "horizon"});
    std::string kind = "double_spend";
    f.read("kind", kind);
    if (kind == "double_spend") {
        spec.kind = AttackKind::DoubleSpend;
    } else if (kind == "majority_overtake") {
        spec.kind = AttackKind::MajorityOvertake;
    } else {
        throw ConfigError("attack.kind", "expected double_spend or majority_overtake");
    }
    f.read("q", spec.attacker_share);
    f.read("z", spec.confirmations);
    f.read("premine_lead", spec.premine_lead);
    f.read("publish_lead", spec.publish_lead);
    f.read("trials", spec.trials);
    f.read("horizon", spec.horizon);
    validate_attack(spec);
    return spec;
}

} // namespace blocksim
