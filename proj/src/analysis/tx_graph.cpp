#include <blocksim/analysis/tx_graph.hpp>

#include <blocksim/chain_io.hpp>
#include <blocksim/reward.hpp>

#include <stdexcept>
#include <unordered_map>

namespace blocksim {

std::vector<Address> TxNode::input_addresses() const
{
    std::set<Address> unique;
    for (const auto& s : spends) unique.insert(s.address);
    return {unique.begin(), unique.end()};
}

Amount TxNode::total_in() const
{
    Amount total;
    for (const auto& s : spends) total += s.amount;
    return total;
}

Amount TxNode::total_out() const
{
    Amount total;
    for (const auto& o : outputs) total += o.amount;
    return total;
}

const TxNode* TxGraph::find(const Hash256& id) const
{
    auto it = index.find(id);
    return it == index.end() ? nullptr : &txs[it->second];
}

std::size_t TxGraph::spend_edges() const
{
    std::size_t n = 0;
    for (const auto& t : txs) n += t.spends.size();
    return n;
}

std::size_t TxGraph::output_edges() const
{
    std::size_t n = 0;
    for (const auto& t : txs) n += t.outputs.size();
    return n;
}

TxGraph build_tx_graph(const std::vector<Block>& chain)
{
    TxGraph g;
    std::unordered_map<OutPoint, TxOutput, OutPointHasher> outputs;
    auto add = [&](const Transaction& tx, const Hash256& block, uint64_t height) {
        TxNode node;
        node.id = tx.id();
        node.block = block;
        node.height = height;
        node.coinbase = tx.is_coinbase();
        for (const auto& in : tx.inputs()) {
            auto it = outputs.find(in.prevout);
            if (it == outputs.end()) {
                throw std::invalid_argument("transaction " + tx.id().hex() + " spends an output outside the export");
            }
            node.spends.push_back(it->second);
            g.addresses.insert(it->second.address);
        }
        for (uint32_t i = 0; i < tx.outputs().size(); ++i) {
            outputs.emplace(OutPoint{tx.id(), i}, tx.outputs()[i]);
            node.outputs.push_back(tx.outputs()[i]);
            g.addresses.insert(tx.outputs()[i].address);
        }
        g.index.emplace(node.id, g.txs.size());
        g.txs.push_back(std::move(node));
    };
    for (const auto& b : chain) {
        const Hash256 id = b.id();
        add(*b.coinbase, id, b.header.height);
        for (const auto& tx : b.txs) add(*tx, id, b.header.height);
    }
    return g;
}

TxGraph build_tx_graph(std::istream& chain_export)
{
    return build_tx_graph(import_chain(chain_export));
}

std::vector<std::string> conservation_violations(const TxGraph& graph, const RewardSchedule& reward)
{
    std::vector<std::string> out;
    std::map<Hash256, Amount> fees;
    std::map<Hash256, const TxNode*> coinbases;
    for (const auto& t : graph.txs) {
        if (t.coinbase) {
            coinbases[t.block] = &t;
            continue;
        }
        if (t.total_out() > t.total_in()) {
            out.push_back("tx " + t.id.hex() + " creates value");
            continue;
        }
        fees[t.block] += t.total_in() - t.total_out();
    }
    for (const auto& [block, cb] : coinbases) {
        if (cb->height == 0) continue; // genesis allocation
        if (cb->total_out() > block_reward(cb->height, reward) + fees[block]) {
            out.push_back("coinbase " + cb->id.hex() + " claims more than reward + fees");
        }
    }
    return out;
}

} // namespace blocksim
