#pragma once

#include <blocksim/chainstore.hpp>
#include <blocksim/netsim/config.hpp>
#include <blocksim/netsim/mempool.hpp>
#include <blocksim/netsim/random.hpp>
#include <blocksim/netsim/trace.hpp>

#include <map>
#include <optional>
#include <queue>
#include <unordered_set>
#include <vector>

namespace blocksim {

struct NodeState {
    uint32_t id = 0;
    bool spy = false;
    ChainStore chain;
    Mempool mempool;
    std::vector<uint32_t> peers;
    std::unordered_set<Hash256, Hash256Hasher> seen_txs;
    std::unordered_set<Hash256, Hash256Hasher> seen_blocks;
    std::vector<KeyPair> keys;
    std::map<Address, std::size_t> key_index;
};

/**
 * Discrete-event network run. Events are processed in (time, seq) order, seq being
 * assigned when an event is scheduled. All randomness comes from one generator seeded
 * with SimConfig::rng_seed, so a config fully determines the trace.
 *
 * Miners do not hash: each holds an exponential clock with rate
 *   share * hashrate_multiplier / mean_block_interval * (next_target / genesis_target)
 * which is redrawn whenever the miner's tip changes or the hashrate changes.
 */
class Simulation
{
public:
    /// Validates the config; throws ConfigError.
    explicit Simulation(SimConfig config);

    const SimConfig& config() const { return config_; }
    double now() const { return now_; }
    /// Includes the spy, if any.
    std::size_t node_count() const { return nodes_.size(); }
    const NodeState& node(uint32_t id) const { return nodes_.at(id); }
    std::optional<uint32_t> spy_node() const { return spy_; }
    const SignatureScheme& scheme() const { return *scheme_; }
    const ChainParams& chain_params() const { return chain_params_; }
    uint64_t blocks_found() const { return blocks_found_; }

    /// Schedules `tx` to enter the network at `node` at `time`.
    void broadcast_transaction(uint32_t node, TransactionRef tx, double time);
    /// Schedules a block discovery at `node` at `time`, independent of the miner clocks and max_blocks.
    void schedule_block_found(uint32_t node, double time);

    /// Processes every event with time <= `until`.
    void run_until(double until);
    /// Processes pending relays only, until none remain, then records every node's tip.
    void drain();
    /// run_until(duration), drain(), and return the trace with final tips.
    EventTrace run();

    const EventTrace& trace() const { return trace_; }

private:
    struct Pending {
        double time = 0.0;
        uint64_t seq = 0;
        EventKind kind = EventKind::Scheduled;
        uint32_t node = 0;
        int32_t from = -1;
        TransactionRef tx;
        BlockRef block;
        uint64_t generation = 0;
        double multiplier = 1.0;
        bool forced = false;
        bool workload = false;
    };
    struct Later {
        bool operator()(const Pending& a, const Pending& b) const
        {
            if (a.time != b.time) return a.time > b.time;
            return a.seq > b.seq;
        }
    };
    struct MinerClock {
        double share = 0.0;
        uint64_t generation = 0;
    };

    void schedule(Pending ev);
    void build_topology();
    bool generation_stopped() const;
    void process(const Pending& ev);

    void on_tx_arrival(const Pending& ev);
    void on_tx_relay(const Pending& ev);
    void on_block_found(const Pending& ev);
    void on_block_relay(const Pending& ev);
    void on_schedule(const Pending& ev);

    void relay_tx(uint32_t node, int32_t except, const TransactionRef& tx);
    void relay_block(uint32_t node, int32_t except, const BlockRef& block);
    void after_connect(uint32_t node, const ConnectOutcome& outcome);
    void reschedule_miner(uint32_t node);
    void schedule_next_workload();
    TraceRecord block_record(const Pending& ev, const NodeState& n, const Hash256& id,
                             const ConnectOutcome& outcome) const;

    Block make_template(uint32_t node) const;
    TransactionRef make_workload_tx(uint32_t node);

    SimConfig config_;
    std::shared_ptr<const SignatureScheme> scheme_;
    ChainParams chain_params_;
    Rng rng_;
    std::vector<NodeState> nodes_;
    std::optional<uint32_t> spy_;
    std::map<uint32_t, MinerClock> miners_;
    double hashrate_multiplier_ = 1.0;
    std::priority_queue<Pending, std::vector<Pending>, Later> queue_;
    uint64_t next_seq_ = 0;
    double now_ = 0.0;
    uint64_t blocks_found_ = 0;
    EventTrace trace_;
};

EventTrace run_simulation(const SimConfig& config);

/// Fixed genesis target for network runs; leaves room for retargeting in both directions.
uint256 network_genesis_target();

} // namespace blocksim
