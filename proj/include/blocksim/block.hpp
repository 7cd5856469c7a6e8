#pragma once

#include <blocksim/target.hpp>
#include <blocksim/transaction.hpp>

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <vector>

namespace blocksim {

struct BlockHeader {
    Hash256 parent_id;
    Hash256 tx_commitment;
    uint256 target;
    uint64_t nonce = 0;
    uint64_t height = 0;
    double timestamp = 0.0;

    Bytes serialize() const;
    Hash256 id() const;
};

struct Block {
    BlockHeader header;
    TransactionRef coinbase;
    std::vector<TransactionRef> txs;

    Hash256 id() const { return header.id(); }
};

using BlockRef = std::shared_ptr<const Block>;

/// Hash over the coinbase id followed by the ordered ids of `txs`.
Hash256 compute_tx_commitment(const Transaction& coinbase, const std::vector<TransactionRef>& txs);

/// Builds a header-complete block (nonce 0) with a matching commitment.
Block make_block(const Hash256& parent, uint64_t height, const uint256& target, double timestamp,
                 TransactionRef coinbase, std::vector<TransactionRef> txs);

/// True iff the header hash, read as a 256-bit integer, is strictly below the target.
bool check_pow(const BlockHeader& header);

struct MineResult {
    std::optional<Block> block;
    uint64_t attempts = 0;
};

/**
 * Nonce search. The starting nonce is drawn from `rng` and then incremented, so the
 * search order is a deterministic function of the generator state. Gives up after
 * `max_attempts` hashes.
 */
MineResult mine_block(Block block, uint64_t max_attempts, std::mt19937_64& rng);

} // namespace blocksim
