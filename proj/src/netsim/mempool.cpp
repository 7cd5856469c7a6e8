#include <blocksim/netsim/mempool.hpp>

#include <algorithm>

namespace blocksim {

Mempool::AddResult Mempool::add(const TransactionRef& tx, const UtxoSet& tip, const SignatureScheme& scheme)
{
    if (contains(tx->id())) return AddResult::Duplicate;
    for (const auto& in : tx->inputs()) {
        if (spends(in.prevout)) return AddResult::Conflict;
    }
    TxValidation v = validate_transaction(*tx, tip, scheme);
    if (!v.ok()) return AddResult::Invalid;

    for (const auto& in : tx->inputs()) spent_.emplace(in.prevout, tx->id());
    entries_.emplace(tx->id(), Entry{tx, v.fee(), tx->serialize().size(), next_sequence_++});
    return AddResult::Accepted;
}

std::vector<TransactionRef> Mempool::select(std::size_t capacity) const
{
    std::vector<const Entry*> order;
    order.reserve(entries_.size());
    for (const auto& [_, e] : entries_) order.push_back(&e);
    // fee_a / size_a > fee_b / size_b, compared exactly by cross-multiplication
    std::sort(order.begin(), order.end(), [](const Entry* a, const Entry* b) {
        __int128 lhs = static_cast<__int128>(a->fee.units()) * static_cast<__int128>(b->size);
        __int128 rhs = static_cast<__int128>(b->fee.units()) * static_cast<__int128>(a->size);
        if (lhs != rhs) return lhs > rhs;
        return a->tx->id() < b->tx->id();
    });
    std::vector<TransactionRef> out;
    for (std::size_t i = 0; i < order.size() && i < capacity; ++i) out.push_back(order[i]->tx);
    return out;
}

Amount Mempool::fee_of(const Hash256& id) const
{
    auto it = entries_.find(id);
    return it == entries_.end() ? Amount() : it->second.fee;
}

void Mempool::erase(const Hash256& id)
{
    auto it = entries_.find(id);
    if (it == entries_.end()) return;
    for (const auto& in : it->second.tx->inputs()) spent_.erase(in.prevout);
    entries_.erase(it);
}

void Mempool::remove_for_block(const Block& block)
{
    for (const auto& tx : block.txs) {
        erase(tx->id());
        for (const auto& in : tx->inputs()) {
            auto it = spent_.find(in.prevout);
            if (it != spent_.end()) erase(it->second);
        }
    }
}

void Mempool::resync(const UtxoSet& tip, const SignatureScheme& scheme, const std::vector<TransactionRef>& returning)
{
    std::vector<Entry> current;
    current.reserve(entries_.size());
    for (auto& [_, e] : entries_) current.push_back(std::move(e));
    std::sort(current.begin(), current.end(), [](const Entry& a, const Entry& b) { return a.sequence < b.sequence; });

    entries_.clear();
    spent_.clear();
    for (const auto& tx : returning) add(tx, tip, scheme);
    for (const auto& e : current) add(e.tx, tip, scheme);
}

} // namespace blocksim
