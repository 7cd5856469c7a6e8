#pragma once

#include <blocksim/block.hpp>
#include <blocksim/validation.hpp>

#include <map>
#include <vector>

namespace blocksim {

/**
 * Valid, unconfirmed transactions of one node. Every member is individually valid
 * against the node's best-tip UtxoSet and no two members spend the same outpoint;
 * the first one seen wins a conflict.
 */
class Mempool
{
public:
    enum class AddResult { Accepted, Duplicate, Conflict, Invalid };

    AddResult add(const TransactionRef& tx, const UtxoSet& tip, const SignatureScheme& scheme);

    bool contains(const Hash256& id) const { return entries_.count(id) != 0; }
    bool spends(const OutPoint& op) const { return spent_.count(op) != 0; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }

    /// Up to `capacity` transactions, highest fee per byte first (ties by id).
    std::vector<TransactionRef> select(std::size_t capacity) const;
    Amount fee_of(const Hash256& id) const;

    /// Drops the block's transactions and anything spending an outpoint the block spent.
    void remove_for_block(const Block& block);

    /// Rebuilds against a new tip after a reorganization. `returning` (transactions the
    /// reorg disconnected, oldest first) are offered before the current members.
    void resync(const UtxoSet& tip, const SignatureScheme& scheme, const std::vector<TransactionRef>& returning);

private:
    struct Entry {
        TransactionRef tx;
        Amount fee;
        std::size_t size = 0;
        uint64_t sequence = 0;
    };

    void erase(const Hash256& id);

    std::map<Hash256, Entry> entries_;
    std::map<OutPoint, Hash256> spent_;
    uint64_t next_sequence_ = 0;
};

} // namespace blocksim
