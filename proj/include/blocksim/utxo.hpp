#pragma once

#include <blocksim/transaction.hpp>

#include <map>
#include <set>
#include <vector>

namespace blocksim {

struct SpentOutput {
    OutPoint outpoint;
    TxOutput output;
};

/// What apply_transaction consumed; enough to undo it.
struct TxUndo {
    std::vector<SpentOutput> spent;
};

/**
 * The set of unspent outputs. Ordered containers keep iteration and serialization
 * deterministic. A per-address index supports wallet coin selection.
 */
class UtxoSet
{
public:
    using Map = std::map<OutPoint, TxOutput>;

    const TxOutput* find(const OutPoint& op) const;
    bool contains(const OutPoint& op) const { return live_.count(op) != 0; }
    std::size_t size() const { return live_.size(); }
    bool empty() const { return live_.empty(); }
    Amount total() const { return total_; }

    /// Outpoints locked to `address`, or an empty set.
    const std::set<OutPoint>& owned_by(const Address& address) const;

    /// Throws std::logic_error if `op` is already present.
    void insert(const OutPoint& op, const TxOutput& out);
    /// Throws std::logic_error if `op` is absent.
    TxOutput erase(const OutPoint& op);

    Map::const_iterator begin() const { return live_.begin(); }
    Map::const_iterator end() const { return live_.end(); }

    /// Canonical encoding of the live map, for byte-level comparison.
    Bytes serialize() const;

    bool operator==(const UtxoSet& other) const { return live_ == other.live_; }

private:
    Map live_;
    std::map<Address, std::set<OutPoint>> by_address_;
    Amount total_;
};

/**
 * In-place state transition: removes the spent outpoints and inserts the new outputs.
 * The caller must have validated `tx` against `utxo`; a missing input is a
 * programming error and throws std::logic_error with `utxo` left unchanged.
 */
TxUndo apply_transaction_in_place(UtxoSet& utxo, const Transaction& tx);
void revert_transaction_in_place(UtxoSet& utxo, const Transaction& tx, const TxUndo& undo);

/// Value-semantics form of apply_transaction_in_place.
UtxoSet apply_transaction(UtxoSet utxo, const Transaction& tx);

} // namespace blocksim
