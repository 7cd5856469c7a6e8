#pragma once

#include <blocksim/analysis/tx_graph.hpp>

#include <map>
#include <vector>

namespace blocksim {

/**
 * Partition of addresses under the multi-input heuristic: addresses spent together in
 * one transaction belong to the same owner, transitively. A cluster is named by its
 * smallest member address.
 */
struct ClusterSet {
    std::map<Address, Address> cluster_of;
    /// cluster id -> transactions that merged two previously separate clusters into it
    std::map<Address, std::vector<Hash256>> merged_by;

    std::size_t cluster_count() const;
    std::map<Address, std::vector<Address>> clusters() const;
};

ClusterSet cluster_addresses(const TxGraph& graph);

/// Same heuristic over bare input sets; every address in `addresses` appears in the result.
ClusterSet cluster_input_sets(const std::set<Address>& addresses,
                              const std::vector<std::pair<Hash256, std::vector<Address>>>& input_sets);

} // namespace blocksim
