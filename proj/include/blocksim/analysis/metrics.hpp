#pragma once

#include <blocksim/analysis/trace_index.hpp>
#include <blocksim/netsim/stats.hpp>

#include <iosfwd>
#include <limits>
#include <map>
#include <vector>

namespace blocksim {

struct MinerSummary {
    int32_t node = 0;
    double share = 0.0;         ///< configured hashrate share
    uint64_t blocks = 0;        ///< blocks found, stale or not
    uint64_t main_chain = 0;    ///< of those, on the reference best chain
    double fraction = 0.0;      ///< blocks / all blocks found
    Interval fraction_ci;       ///< 99% Clopper-Pearson
};

struct ConfirmationSummary {
    uint32_t k = 0;
    std::size_t count = 0;    ///< transactions that reached k confirmations at their source node
    std::size_t censored = 0; ///< eligible transactions that never did
    double mean = 0.0;        ///< seconds from injection
    double stddev = 0.0;
    double median = 0.0;
};

struct SummaryOptions {
    uint32_t max_confirmations = 6;
    /// Only transactions injected at or before this time count toward confirmation waits.
    double tx_cutoff = std::numeric_limits<double>::infinity();
};

struct Summary {
    uint64_t blocks = 0;
    uint64_t stale_blocks = 0; ///< found but not on the reference best chain
    double stale_rate = 0.0;
    uint64_t best_height = 0;
    double end_time = 0.0;
    uint64_t tx_accepted = 0;
    uint64_t tx_skipped = 0;
    std::vector<MinerSummary> miners;
    std::vector<ConfirmationSummary> confirmations;
    std::map<uint32_t, uint64_t> reorg_depths; ///< reorganizations by depth, all nodes
};

/// The reference best chain is the highest final tip, ties to the lowest node id.
Summary summarize(const TraceIndex& index, const SummaryOptions& options = {});
Summary summarize(const EventTrace& trace, const SummaryOptions& options = {});

/// Rows of section,key,value.
void write_summary_csv(const Summary& summary, std::ostream& out);

} // namespace blocksim
