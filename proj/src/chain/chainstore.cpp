#include <blocksim/chainstore.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace blocksim {

std::string_view to_string(BlockError e)
{
    switch (e) {
    case BlockError::None: return "ok";
    case BlockError::UnknownParent: return "unknown-parent";
    case BlockError::BadHeight: return "bad-height";
    case BlockError::BadTarget: return "bad-target";
    case BlockError::BadPow: return "bad-pow";
    case BlockError::TooManyTxs: return "too-many-txs";
    case BlockError::BadCommitment: return "bad-commitment";
    case BlockError::BadCoinbase: return "bad-coinbase";
    case BlockError::InvalidTx: return "invalid-tx";
    case BlockError::ExcessCoinbase: return "excess-coinbase";
    }
    return "unknown";
}

std::string_view to_string(ConnectKind k)
{
    switch (k) {
    case ConnectKind::ExtendedBest: return "extended";
    case ConnectKind::CreatedFork: return "fork";
    case ConnectKind::Reorganized: return "reorg";
    case ConnectKind::Orphaned: return "orphan";
    case ConnectKind::Duplicate: return "duplicate";
    case ConnectKind::Invalid: return "invalid";
    }
    return "unknown";
}

Block make_genesis(const ChainParams& params)
{
    auto coinbase = make_tx_ref(Transaction::coinbase(0, params.genesis_outputs));
    return make_block(Hash256{}, 0, params.genesis_target, params.genesis_time, std::move(coinbase), {});
}

ChainStore::ChainStore(ChainParams params) : params_(std::move(params))
{
    if (!params_.scheme) throw std::invalid_argument("ChainParams.scheme is required");
    if (params_.genesis_target == 0) throw std::invalid_argument("genesis target must be positive");
    if (params_.retarget.enabled && params_.retarget.window == 0) {
        throw std::invalid_argument("retarget window must be positive");
    }

    auto genesis = std::make_shared<const Block>(make_genesis(params_));
    BlockEntry e;
    e.block = genesis;
    e.id = genesis->id();
    e.height = 0;
    e.chain_work = block_work(genesis->header.target);
    e.sequence = next_sequence_++;
    apply_transaction_in_place(best_utxo_, *genesis->coinbase);
    best_chain_.push_back(e.id);
    auto [it, _] = entries_.emplace(e.id, std::move(e));
    index_block_txs(it->second, true);
}

const uint512& ChainStore::best_work() const
{
    return entry(best_tip()).chain_work;
}

const BlockEntry* ChainStore::find(const Hash256& id) const
{
    auto it = entries_.find(id);
    return it == entries_.end() ? nullptr : &it->second;
}

bool ChainStore::on_best_chain(const Hash256& id) const
{
    const BlockEntry* e = find(id);
    return e && e->height < best_chain_.size() && best_chain_[e->height] == id;
}

std::optional<Hash256> ChainStore::ancestor(const Hash256& id, uint64_t height) const
{
    const BlockEntry* e = find(id);
    if (!e || height > e->height) return std::nullopt;
    while (e->height > height) {
        if (on_best_chain(e->id)) return best_chain_[height];
        e = &entry(e->parent);
    }
    return e->id;
}

std::optional<Hash256> ChainStore::containing_block(const Hash256& tx_id) const
{
    auto it = best_tx_index_.find(tx_id);
    if (it == best_tx_index_.end()) return std::nullopt;
    return it->second;
}

uint64_t ChainStore::confirmations(const Hash256& tx_id) const
{
    auto block = containing_block(tx_id);
    if (!block) return 0;
    return best_height() - entry(*block).height + 1;
}

uint256 ChainStore::next_target(const Hash256& parent) const
{
    const BlockEntry& p = entry(parent);
    const uint256& old = p.block->header.target;
    const auto& rt = params_.retarget;
    if (!rt.enabled || (p.height + 1) % rt.window != 0 || p.height < rt.window) return old;

    const BlockEntry& first = entry(*ancestor(parent, p.height - rt.window));
    double mean = (p.block->header.timestamp - first.block->header.timestamp) / rt.window;
    return retarget_target(old, mean, rt.desired_interval);
}

BlockValidation ChainStore::check_and_apply(const Block& block, const BlockEntry& parent, UtxoSet& state,
                                            std::vector<TxUndo>& undo) const
{
    BlockValidation v;
    const BlockHeader& h = block.header;
    auto fail = [&](BlockError e) {
        v.error = e;
        return v;
    };

    if (h.height != parent.height + 1) return fail(BlockError::BadHeight);
    if (h.target != next_target(parent.id)) return fail(BlockError::BadTarget);
    if (params_.pow == PowMode::Verify && !check_pow(h)) return fail(BlockError::BadPow);
    if (block.txs.size() > params_.max_block_txs) return fail(BlockError::TooManyTxs);
    if (!block.coinbase || !block.coinbase->is_coinbase() || block.coinbase->coinbase_height() != h.height) {
        return fail(BlockError::BadCoinbase);
    }
    if (h.tx_commitment != compute_tx_commitment(*block.coinbase, block.txs)) return fail(BlockError::BadCommitment);

    auto rollback = [&] {
        for (std::size_t i = undo.size(); i-- > 0;) revert_transaction_in_place(state, *block.txs[i], undo[i]);
        undo.clear();
    };

    undo.clear();
    undo.reserve(block.txs.size());
    Amount fees;
    for (std::size_t i = 0; i < block.txs.size(); ++i) {
        const Transaction& tx = *block.txs[i];
        TxValidation tv = validate_transaction(tx, state, *params_.scheme);
        if (!tv.ok()) {
            rollback();
            v.tx_index = i;
            v.tx_error = tv.error();
            return fail(BlockError::InvalidTx);
        }
        fees += tv.fee();
        undo.push_back(apply_transaction_in_place(state, tx));
    }

    Amount limit = block_reward(h.height, params_.reward) + fees;
    if (block.coinbase->total_output() > limit) {
        rollback();
        return fail(BlockError::ExcessCoinbase);
    }
    apply_transaction_in_place(state, *block.coinbase);
    v.fees = fees;
    return v;
}

UtxoSet ChainStore::rebuild_state(const Hash256& id) const
{
    std::vector<const BlockEntry*> path;
    const BlockEntry* e = &entry(id);
    while (!on_best_chain(e->id)) {
        path.push_back(e);
        e = &entry(e->parent);
    }
    UtxoSet state = best_utxo_;
    for (uint64_t h = best_height(); h > e->height; --h) {
        const BlockEntry& d = entry(best_chain_[h]);
        revert_transaction_in_place(state, *d.block->coinbase, TxUndo{});
        for (std::size_t i = d.undo.size(); i-- > 0;) revert_transaction_in_place(state, *d.block->txs[i], d.undo[i]);
    }
    for (auto it = path.rbegin(); it != path.rend(); ++it) {
        for (const auto& tx : (*it)->block->txs) apply_transaction_in_place(state, *tx);
        apply_transaction_in_place(state, *(*it)->block->coinbase);
    }
    return state;
}

UtxoSet ChainStore::utxo_at(const Hash256& id) const
{
    if (!contains(id)) throw std::invalid_argument("utxo_at: unknown block " + id.hex());
    if (id == best_tip()) return best_utxo_;
    if (auto it = side_states_.find(id); it != side_states_.end()) return it->second;
    return rebuild_state(id);
}

UtxoSet ChainStore::take_state(const Hash256& parent, bool& from_cache)
{
    from_cache = false;
    if (parent == best_tip()) return best_utxo_;
    if (auto it = side_states_.find(parent); it != side_states_.end()) {
        UtxoSet s = std::move(it->second);
        side_states_.erase(it);
        from_cache = true;
        return s;
    }
    return rebuild_state(parent);
}

void ChainStore::cache_side_state(const Hash256& id, UtxoSet state)
{
    side_states_.insert_or_assign(id, std::move(state));
    side_order_.push_back(id);
    while (side_states_.size() > kSideStateLimit && !side_order_.empty()) {
        side_states_.erase(side_order_.front());
        side_order_.pop_front();
    }
    if (side_order_.size() > 4 * kSideStateLimit) {
        std::erase_if(side_order_, [&](const Hash256& h) { return !side_states_.count(h); });
    }
}

BlockValidation ChainStore::validate_block(const Block& block) const
{
    const BlockEntry* parent = find(block.header.parent_id);
    if (!parent) {
        BlockValidation v;
        v.error = BlockError::UnknownParent;
        return v;
    }
    UtxoSet state = utxo_at(parent->id);
    std::vector<TxUndo> undo;
    return check_and_apply(block, *parent, state, undo);
}

void ChainStore::index_block_txs(const BlockEntry& e, bool add)
{
    auto touch = [&](const Transaction& tx) {
        if (add) {
            best_tx_index_[tx.id()] = e.id;
        } else {
            best_tx_index_.erase(tx.id());
        }
    };
    touch(*e.block->coinbase);
    for (const auto& tx : e.block->txs) touch(*tx);
}

void ChainStore::switch_best(const Hash256& new_tip, UtxoSet state)
{
    const BlockEntry& tip = entry(new_tip);
    std::vector<const BlockEntry*> path;
    const BlockEntry* e = &tip;
    while (!on_best_chain(e->id)) {
        path.push_back(e);
        e = &entry(e->parent);
    }
    Hash256 old_tip = best_tip();
    while (best_height() > e->height) {
        index_block_txs(entry(best_chain_.back()), false);
        best_chain_.pop_back();
    }
    for (auto it = path.rbegin(); it != path.rend(); ++it) {
        best_chain_.push_back((*it)->id);
        index_block_txs(**it, true);
    }
    cache_side_state(old_tip, std::move(best_utxo_));
    best_utxo_ = std::move(state);
}

BlockValidation ChainStore::attach(const BlockRef& block, const Hash256& id)
{
    const Hash256 parent_id = block->header.parent_id;
    const bool extends_best = parent_id == best_tip();
    std::vector<TxUndo> undo;
    BlockValidation v;
    UtxoSet state;
    bool from_cache = false;
    if (extends_best) {
        // check_and_apply leaves the state untouched on failure, so the live set is safe to use.
        v = check_and_apply(*block, entry(parent_id), best_utxo_, undo);
    } else {
        state = take_state(parent_id, from_cache);
        v = check_and_apply(*block, entry(parent_id), state, undo);
    }
    if (!v.ok()) {
        if (from_cache) cache_side_state(parent_id, std::move(state));
        return v;
    }

    BlockEntry& parent = entries_.at(parent_id);
    BlockEntry e;
    e.block = block;
    e.id = id;
    e.parent = parent_id;
    e.height = parent.height + 1;
    e.chain_work = parent.chain_work + block_work(block->header.target);
    e.sequence = next_sequence_++;
    e.undo = std::move(undo);
    parent.children.push_back(id);
    const uint512 work = e.chain_work;
    const BlockEntry& inserted = entries_.emplace(id, std::move(e)).first->second;

    if (extends_best) {
        best_chain_.push_back(id);
        index_block_txs(inserted, true);
    } else if (work > best_work()) {
        switch_best(id, std::move(state));
    } else {
        cache_side_state(id, std::move(state));
    }
    return v;
}

void ChainStore::buffer_orphan(const BlockRef& block, const Hash256& id)
{
    if (params_.orphan_limit == 0) return;
    while (orphan_ids_.size() >= params_.orphan_limit && !orphan_order_.empty()) {
        auto [old_id, old_parent] = orphan_order_.front();
        orphan_order_.pop_front();
        if (!orphan_ids_.erase(old_id)) continue;
        auto& siblings = orphans_by_parent_[old_parent];
        std::erase_if(siblings, [&](const auto& p) { return p.first == old_id; });
        if (siblings.empty()) orphans_by_parent_.erase(old_parent);
    }
    orphan_ids_.insert(id);
    orphan_order_.emplace_back(id, block->header.parent_id);
    orphans_by_parent_[block->header.parent_id].emplace_back(id, block);
}

ConnectOutcome ChainStore::connect_block(BlockRef block)
{
    ConnectOutcome out;
    const Hash256 id = block->id();
    if (contains(id) || orphan_ids_.count(id)) {
        out.kind = ConnectKind::Duplicate;
        return out;
    }
    if (!contains(block->header.parent_id)) {
        buffer_orphan(block, id);
        out.kind = ConnectKind::Orphaned;
        out.validation.error = BlockError::UnknownParent;
        return out;
    }

    const Hash256 old_tip = best_tip();

    out.validation = attach(block, id);
    if (!out.validation.ok()) {
        out.kind = ConnectKind::Invalid;
        return out;
    }

    std::deque<Hash256> adopt{id};
    while (!adopt.empty()) {
        Hash256 pid = adopt.front();
        adopt.pop_front();
        auto it = orphans_by_parent_.find(pid);
        if (it == orphans_by_parent_.end()) continue;
        auto children = std::move(it->second);
        orphans_by_parent_.erase(it);
        for (auto& [cid, child] : children) {
            orphan_ids_.erase(cid);
            if (attach(child, cid).ok()) {
                ++out.orphans_connected;
                adopt.push_back(cid);
            }
        }
    }

    // Best-chain delta between the old and new tips.
    if (best_tip() != old_tip) {
        const BlockEntry* e = &entry(old_tip);
        while (!on_best_chain(e->id)) {
            out.disconnected.push_back(e->id);
            e = &entry(e->parent);
        }
        for (uint64_t h = e->height + 1; h <= best_height(); ++h) out.connected.push_back(best_chain_[h]);
        for (auto it = out.disconnected.rbegin(); it != out.disconnected.rend(); ++it) {
            for (const auto& tx : entry(*it).block->txs) {
                if (!best_tx_index_.count(tx->id())) out.unconfirmed.push_back(tx);
            }
        }
    }

    if (out.connected.empty()) {
        out.kind = ConnectKind::CreatedFork;
    } else if (out.disconnected.empty()) {
        out.kind = ConnectKind::ExtendedBest;
    } else {
        out.kind = ConnectKind::Reorganized;
    }
    return out;
}

} // namespace blocksim
