#include <blocksim/adversary/green_address.hpp>

#include <blocksim/netsim/simulation.hpp>

#include <algorithm>

namespace blocksim {

bool GreenAddressPolicy::trusts(const std::vector<Address>& senders) const
{
    return !senders.empty() &&
           std::all_of(senders.begin(), senders.end(), [&](const Address& a) { return whitelist.count(a) != 0; });
}

PaymentDecision accept_payment(const GreenAddressPolicy& policy, const Transaction& tx,
                               const std::vector<Address>& senders, uint64_t confirmations, uint64_t required)
{
    if (confirmations >= required) return PaymentDecision::Accept;
    if (!tx.is_coinbase() && policy.trusts(senders)) return PaymentDecision::Accept;
    return PaymentDecision::Wait;
}

GreenAddressOutcome run_green_address_scenario(bool sender_whitelisted, bool sender_double_spends,
                                               uint64_t required_confirmations, uint64_t seed)
{
    constexpr uint32_t kMerchant = 0, kMiner = 1, kSender = 2;
    SimConfig cfg;
    cfg.rng_seed = seed;
    cfg.node_count = 3;
    cfg.latency.lo_ms = 100;
    cfg.miners = {{kMiner, 1.0}};
    cfg.workload.genesis_funding = Amount::coins(1).units();
    cfg.max_blocks = required_confirmations + 3;
    cfg.duration = 1e12;
    Simulation sim(cfg);

    const NodeState& sender = sim.node(kSender);
    const Address from = derive_address(sender.keys[0].public_key);
    const UtxoSet& utxo = sender.chain.best_utxo();
    const OutPoint coin = *utxo.owned_by(from).begin();
    const Amount value = utxo.find(coin)->amount;
    const Amount fee(1'000);
    const std::vector<KeyPair> signer{sender.keys[0]};

    Transaction pay = Transaction::spend(
        {TxInput{coin, {}, {}}}, {TxOutput{derive_address(sim.node(kMerchant).keys[0].public_key), value - fee}});
    TransactionRef payment = make_tx_ref(sign_transaction(pay, signer, utxo, sim.scheme()));

    GreenAddressPolicy policy;
    if (sender_whitelisted) policy.whitelist.insert(from);

    if (sender_double_spends) {
        Transaction back = Transaction::spend({TxInput{coin, {}, {}}},
                                              {TxOutput{derive_address(sender.keys[1].public_key), value - fee}});
        sim.broadcast_transaction(kMerchant, payment, 1.0);
        sim.broadcast_transaction(kMiner, make_tx_ref(sign_transaction(back, signer, utxo, sim.scheme())), 1.0);
    } else {
        sim.broadcast_transaction(kSender, payment, 1.0);
    }

    GreenAddressOutcome out;
    const NodeState& merchant = sim.node(kMerchant);
    auto poll = [&] {
        if (out.accepted) return;
        const bool known = merchant.mempool.contains(payment->id()) || merchant.chain.confirmations(payment->id()) > 0;
        if (!known) return;
        const uint64_t conf = merchant.chain.confirmations(payment->id());
        if (accept_payment(policy, *payment, {from}, conf, required_confirmations) == PaymentDecision::Accept) {
            out.accepted = true;
            out.confirmations_at_acceptance = conf;
        }
    };
    for (double t = 0.0; sim.blocks_found() < cfg.max_blocks; t += 1.0) {
        sim.run_until(t);
        poll();
    }
    sim.drain();
    poll();

    out.payment_confirmed = merchant.chain.confirmations(payment->id()) > 0;
    out.loss = out.accepted && !out.payment_confirmed;
    return out;
}

} // namespace blocksim
