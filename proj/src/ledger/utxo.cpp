#include <blocksim/serialize.hpp>
#include <blocksim/utxo.hpp>

#include <stdexcept>

namespace blocksim {

const TxOutput* UtxoSet::find(const OutPoint& op) const
{
    auto it = live_.find(op);
    return it == live_.end() ? nullptr : &it->second;
}

const std::set<OutPoint>& UtxoSet::owned_by(const Address& address) const
{
    static const std::set<OutPoint> none;
    auto it = by_address_.find(address);
    return it == by_address_.end() ? none : it->second;
}

void UtxoSet::insert(const OutPoint& op, const TxOutput& out)
{
    auto [it, inserted] = live_.emplace(op, out);
    if (!inserted) throw std::logic_error("outpoint already unspent: " + op.tx_id.hex());
    by_address_[out.address].insert(op);
    total_ += out.amount;
}

TxOutput UtxoSet::erase(const OutPoint& op)
{
    auto it = live_.find(op);
    if (it == live_.end()) throw std::logic_error("outpoint not unspent: " + op.tx_id.hex());
    TxOutput out = it->second;
    live_.erase(it);
    auto idx = by_address_.find(out.address);
    idx->second.erase(op);
    if (idx->second.empty()) by_address_.erase(idx);
    total_ -= out.amount;
    return out;
}

Bytes UtxoSet::serialize() const
{
    Writer w;
    w.put_u64(live_.size());
    for (const auto& [op, out] : live_) {
        w.put_hash(op.tx_id);
        w.put_u32(op.index);
        w.put_hash(out.address.digest);
        w.put_i64(out.amount.units());
    }
    return std::move(w).take();
}

TxUndo apply_transaction_in_place(UtxoSet& utxo, const Transaction& tx)
{
    for (const auto& in : tx.inputs()) {
        if (!utxo.contains(in.prevout)) {
            throw std::logic_error("apply_transaction: input not unspent in " + tx.id().hex());
        }
    }
    TxUndo undo;
    undo.spent.reserve(tx.inputs().size());
    for (const auto& in : tx.inputs()) {
        undo.spent.push_back({in.prevout, utxo.erase(in.prevout)});
    }
    for (uint32_t i = 0; i < tx.outputs().size(); ++i) {
        utxo.insert(OutPoint{tx.id(), i}, tx.outputs()[i]);
    }
    return undo;
}

void revert_transaction_in_place(UtxoSet& utxo, const Transaction& tx, const TxUndo& undo)
{
    for (uint32_t i = 0; i < tx.outputs().size(); ++i) {
        utxo.erase(OutPoint{tx.id(), i});
    }
    for (auto it = undo.spent.rbegin(); it != undo.spent.rend(); ++it) {
        utxo.insert(it->outpoint, it->output);
    }
}

UtxoSet apply_transaction(UtxoSet utxo, const Transaction& tx)
{
    apply_transaction_in_place(utxo, tx);
    return utxo;
}

} // namespace blocksim
