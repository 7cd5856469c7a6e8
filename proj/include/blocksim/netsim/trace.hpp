#pragma once

#include <blocksim/hash.hpp>

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace blocksim {

enum class EventKind { TxArrival, TxRelay, BlockFound, BlockRelay, Scheduled };

std::string_view to_string(EventKind k);
std::optional<EventKind> event_kind_from_string(std::string_view s);

/**
 * One processed event. Which fields are meaningful depends on `kind`:
 *  - TxArrival: node (injection point), object (tx id), status accepted|rejected|skipped
 *  - TxRelay: node (receiver), from, object (tx id), status new|duplicate|rejected
 *  - BlockFound: node (miner), object, parent, height, txids, status (connect outcome)
 *  - BlockRelay: node (receiver), from, object, status (connect outcome)
 *  - Scheduled: multiplier (network hashrate change)
 * Block events also carry the receiving node's tip afterwards (tip, tip_height, reorg_depth).
 */
struct TraceRecord {
    double time = 0.0;
    uint64_t seq = 0;
    EventKind kind = EventKind::Scheduled;
    int32_t node = -1;
    int32_t from = -1;
    Hash256 object;
    std::string status;
    Hash256 parent;
    uint64_t height = 0;
    std::vector<Hash256> txids; ///< non-coinbase transactions of a found block
    Hash256 tip;
    uint64_t tip_height = 0;
    uint32_t reorg_depth = 0;
    double multiplier = 0.0;
};

struct NodeTip {
    int32_t node = 0;
    Hash256 tip;
    uint64_t height = 0;
};

struct TraceParseError : std::runtime_error {
    TraceParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line(line)
    {
    }
    std::size_t line;
};

/**
 * Deterministic record of a run. Serialized as JSON Lines: a Meta line, one line per
 * processed event, then one Final line per node.
 */
struct EventTrace {
    nlohmann::json config;     ///< resolved SimConfig
    std::string sig_scheme;
    uint32_t node_count = 0;   ///< honest nodes, excluding the spy
    std::optional<int32_t> spy_node;
    std::vector<TraceRecord> records;
    std::vector<NodeTip> final_tips;

    void write_jsonl(std::ostream& out) const;
    static EventTrace read_jsonl(std::istream& in);
};

} // namespace blocksim
