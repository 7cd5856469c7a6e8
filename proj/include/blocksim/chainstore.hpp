#pragma once

#include <blocksim/block.hpp>
#include <blocksim/reward.hpp>
#include <blocksim/utxo.hpp>
#include <blocksim/validation.hpp>

#include <cstdint>
#include <deque>
#include <memory>
#include <optional>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace blocksim {

/// Verify: headers must satisfy check_pow(). Simulated: the proof of work is assumed
/// (network runs draw discovery times instead of hashing); targets still weigh forks.
enum class PowMode { Verify, Simulated };

struct RetargetParams {
    bool enabled = false;
    uint32_t window = 32;
    double desired_interval = 600.0;
};

struct ChainParams {
    std::shared_ptr<const SignatureScheme> scheme;
    uint256 genesis_target = max_target();
    RewardSchedule reward;
    RetargetParams retarget;
    std::size_t max_block_txs = 1000;
    std::size_t orphan_limit = 100;
    PowMode pow = PowMode::Verify;
    /// Genesis coinbase outputs. Empty means the genesis block pays nothing.
    std::vector<TxOutput> genesis_outputs;
    double genesis_time = 0.0;
};

/// All-zero parent, height 0, genesis_target, coinbase paying genesis_outputs.
Block make_genesis(const ChainParams& params);

enum class BlockError {
    None,
    UnknownParent,
    BadHeight,
    BadTarget,
    BadPow,
    TooManyTxs,
    BadCommitment,
    BadCoinbase,
    InvalidTx,
    ExcessCoinbase,
};

std::string_view to_string(BlockError e);

struct BlockValidation {
    BlockError error = BlockError::None;
    std::size_t tx_index = 0; ///< for InvalidTx
    TxError tx_error = TxError::None;
    Amount fees;

    bool ok() const { return error == BlockError::None; }
};

enum class ConnectKind {
    ExtendedBest, ///< best tip moved forward without disconnecting anything
    CreatedFork,  ///< stored on a branch that does not carry the most work
    Reorganized,  ///< best tip moved to another branch
    Orphaned,     ///< parent unknown; buffered
    Duplicate,
    Invalid,
};

std::string_view to_string(ConnectKind k);

struct ConnectOutcome {
    ConnectKind kind = ConnectKind::Invalid;
    BlockValidation validation;
    /// Best-chain blocks removed, old tip first.
    std::vector<Hash256> disconnected;
    /// Blocks newly on the best chain, in height order.
    std::vector<Hash256> connected;
    /// Non-coinbase transactions whose block left the best chain and which are not on the new one.
    std::vector<TransactionRef> unconfirmed;
    /// Buffered orphans connected as a consequence of this block.
    std::size_t orphans_connected = 0;

    std::size_t reorg_depth() const { return disconnected.size(); }
    bool tip_changed() const { return !connected.empty(); }
};

struct BlockEntry {
    BlockRef block;
    Hash256 id;
    Hash256 parent;
    uint64_t height = 0;
    uint512 chain_work;
    uint64_t sequence = 0; ///< arrival order; earlier wins work ties
    std::vector<TxUndo> undo; ///< one per non-coinbase transaction
    std::vector<Hash256> children;
};

/**
 * Block tree rooted at genesis with fork choice by cumulative work (first seen wins
 * ties). Every stored block has been validated against its parent's ledger state.
 * The best tip's UtxoSet is kept live; states of recent side-branch tips are cached,
 * others are rebuilt from undo data on demand.
 *
 * Single writer. Copies are independent.
 */
class ChainStore
{
public:
    explicit ChainStore(ChainParams params);

    const ChainParams& params() const { return params_; }
    const Hash256& genesis_id() const { return best_chain_.front(); }
    const Hash256& best_tip() const { return best_chain_.back(); }
    uint64_t best_height() const { return best_chain_.size() - 1; }
    const uint512& best_work() const;
    const UtxoSet& best_utxo() const { return best_utxo_; }

    const BlockEntry* find(const Hash256& id) const;
    bool contains(const Hash256& id) const { return entries_.count(id) != 0; }
    std::size_t size() const { return entries_.size(); }
    std::size_t orphan_count() const { return orphan_ids_.size(); }

    bool on_best_chain(const Hash256& id) const;
    /// Genesis first.
    const std::vector<Hash256>& best_chain() const { return best_chain_; }
    std::optional<Hash256> ancestor(const Hash256& id, uint64_t height) const;

    /// Block on the best chain that contains `tx_id`.
    std::optional<Hash256> containing_block(const Hash256& tx_id) const;
    /// best height - containing height + 1, or 0 when not on the best chain.
    uint64_t confirmations(const Hash256& tx_id) const;

    /// Ledger state after applying block `id` (which must be stored).
    UtxoSet utxo_at(const Hash256& id) const;

    /// Target a child of `parent` must carry.
    uint256 next_target(const Hash256& parent) const;

    /// Full check of `block` against its parent's state. Does not modify the store.
    BlockValidation validate_block(const Block& block) const;

    ConnectOutcome connect_block(BlockRef block);
    ConnectOutcome connect_block(Block block) { return connect_block(std::make_shared<const Block>(std::move(block))); }

private:
    static constexpr std::size_t kSideStateLimit = 16;

    const BlockEntry& entry(const Hash256& id) const { return entries_.at(id); }

    /// Applies `block` on top of `state` if valid; on failure `state` is left untouched.
    BlockValidation check_and_apply(const Block& block, const BlockEntry& parent, UtxoSet& state,
                                    std::vector<TxUndo>& undo) const;

    UtxoSet rebuild_state(const Hash256& id) const;
    UtxoSet take_state(const Hash256& parent, bool& from_cache);
    void cache_side_state(const Hash256& id, UtxoSet state);

    /// Connects a block whose parent is stored. Returns the validation result.
    BlockValidation attach(const BlockRef& block, const Hash256& id);
    void switch_best(const Hash256& new_tip, UtxoSet state);
    void index_block_txs(const BlockEntry& e, bool add);
    void buffer_orphan(const BlockRef& block, const Hash256& id);

    ChainParams params_;
    std::unordered_map<Hash256, BlockEntry, Hash256Hasher> entries_;
    std::vector<Hash256> best_chain_;
    UtxoSet best_utxo_;
    std::unordered_map<Hash256, Hash256, Hash256Hasher> best_tx_index_;

    std::unordered_map<Hash256, UtxoSet, Hash256Hasher> side_states_;
    std::deque<Hash256> side_order_;

    std::unordered_map<Hash256, std::vector<std::pair<Hash256, BlockRef>>, Hash256Hasher> orphans_by_parent_;
    std::unordered_set<Hash256, Hash256Hasher> orphan_ids_;
    std::deque<std::pair<Hash256, Hash256>> orphan_order_; ///< (id, parent), oldest first

    uint64_t next_sequence_ = 0;
};

/// Proportional retarget: old * (mean_interval / desired_interval), ratio clamped to
/// [1/4, 4], result clamped to [1, 2^256 - 1].
uint256 retarget_target(const uint256& old_target, double mean_interval, double desired_interval);

/**
 * Target for the block after the best tip, from the mean interval over the last
 * `window` blocks of the best chain. Throws std::invalid_argument if the best chain
 * is shorter than `window` blocks past genesis.
 */
uint256 retarget(const ChainStore& store, uint32_t window, double desired_interval);

} // namespace blocksim
