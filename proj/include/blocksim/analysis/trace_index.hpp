#pragma once

#include <blocksim/netsim/trace.hpp>

#include <map>
#include <optional>
#include <unordered_map>
#include <vector>

namespace blocksim {

/**
 * Queries over an EventTrace: the block tree assembled from BlockFound records and each
 * node's best tip over time. Blocks whose parent never appears in the trace hang off an
 * implicit genesis at height 0.
 */
class TraceIndex
{
public:
    struct TipChange {
        double time = 0.0;
        uint64_t seq = 0;
        Hash256 tip;
        uint64_t height = 0;
    };
    struct BlockInfo {
        Hash256 parent;
        uint64_t height = 0;
        int32_t miner = -1;
        double found_at = 0.0;
        std::vector<Hash256> txids;
    };

    explicit TraceIndex(const EventTrace& trace);

    const EventTrace& trace() const { return trace_; }
    const BlockInfo* block(const Hash256& id) const;
    const std::unordered_map<Hash256, BlockInfo, Hash256Hasher>& blocks() const { return blocks_; }

    /// Tip of `node` after every event with time <= `time` (genesis before any block).
    TipChange tip_at(int32_t node, double time) const;
    const std::vector<TipChange>& timeline(int32_t node) const;

    /// True iff `ancestor` is `descendant` or lies on its chain.
    bool is_ancestor(const Hash256& ancestor, const Hash256& descendant) const;
    /// Blocks found in the trace that contain `tx`.
    const std::vector<Hash256>& blocks_containing(const Hash256& tx) const;
    /// First time `node` saw `tx` in a TxArrival or TxRelay record.
    std::optional<double> first_seen(const Hash256& tx, int32_t node) const;
    /// First time `node` received or found `block`.
    std::optional<double> block_seen(const Hash256& block, int32_t node) const;
    /// Node where the transaction entered the network, if it was accepted there.
    std::optional<int32_t> source(const Hash256& tx) const;
    /// Accepted transaction arrivals in trace order: (tx, node, time).
    const std::vector<std::tuple<Hash256, int32_t, double>>& arrivals() const { return arrivals_; }

    /// Confirmations of `tx` on the chain `tip` points at.
    uint64_t confirmations_on(const Hash256& tx, const Hash256& tip, uint64_t tip_height) const;

private:
    Hash256 ancestor_at(Hash256 id, uint64_t height) const;

    const EventTrace& trace_;
    std::unordered_map<Hash256, BlockInfo, Hash256Hasher> blocks_;
    std::unordered_map<Hash256, std::vector<Hash256>, Hash256Hasher> jumps_; ///< jumps_[b][i]: 2^i-th ancestor
    std::map<int32_t, std::vector<TipChange>> timelines_;
    std::unordered_map<Hash256, std::vector<Hash256>, Hash256Hasher> containing_;
    std::unordered_map<Hash256, std::map<int32_t, double>, Hash256Hasher> first_seen_;
    std::unordered_map<Hash256, std::map<int32_t, double>, Hash256Hasher> block_seen_;
    std::unordered_map<Hash256, int32_t, Hash256Hasher> source_;
    std::vector<std::tuple<Hash256, int32_t, double>> arrivals_;
};

/**
 * Confirmations of `tx` at `node` as of `time`: 0 while unconfirmed (including after being
 * reorganized out), otherwise tip height - containing block height + 1. Empty when the node
 * had neither seen the transaction nor has it on its chain by then.
 */
std::optional<uint64_t> confirmations(const TraceIndex& index, const Hash256& tx, int32_t node, double time);

} // namespace blocksim
