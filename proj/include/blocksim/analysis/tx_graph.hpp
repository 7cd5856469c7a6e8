#pragma once

#include <blocksim/block.hpp>
#include <blocksim/reward.hpp>

#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace blocksim {

/// Address-level view of one transaction.
struct TxNode {
    Hash256 id;
    Hash256 block;
    uint64_t height = 0;
    bool coinbase = false;
    std::vector<TxOutput> spends;  ///< address -> tx edges: the outputs this tx consumes
    std::vector<TxOutput> outputs; ///< tx -> address edges

    std::vector<Address> input_addresses() const;
    Amount total_in() const;
    Amount total_out() const;
};

/**
 * Transactions and addresses of an exported best chain. Every spend edge is resolved
 * against an earlier output of the same export.
 */
struct TxGraph {
    std::vector<TxNode> txs; ///< chain order, coinbase first within each block
    std::map<Hash256, std::size_t> index;
    std::set<Address> addresses;

    const TxNode* find(const Hash256& id) const;
    std::size_t spend_edges() const;
    std::size_t output_edges() const;
};

/// Throws std::invalid_argument when a spend refers to an output that is not in the export.
TxGraph build_tx_graph(const std::vector<Block>& chain);
/// Reads a chain export; throws ChainParseError with the offending line.
TxGraph build_tx_graph(std::istream& chain_export);

/// Transactions whose outputs exceed their inputs, or coinbases claiming more than
/// reward + fees of their block. Empty on a consistent chain.
std::vector<std::string> conservation_violations(const TxGraph& graph, const RewardSchedule& reward);

} // namespace blocksim
