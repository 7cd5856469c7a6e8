#pragma once

#include <blocksim/chainstore.hpp>
#include <blocksim/netsim/random.hpp>

#include <json.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace blocksim {

enum class TopologyKind { Complete, Random, Ring, Star };

struct Topology {
    TopologyKind kind = TopologyKind::Complete;
    double p = 0.5; ///< edge probability for Random
};

/// Per-message link delay. Configured in milliseconds, sampled in seconds.
struct LatencyModel {
    enum class Kind { Constant, Uniform };
    Kind kind = Kind::Constant;
    double lo_ms = 0.0;
    double hi_ms = 0.0; ///< Uniform only

    double sample_seconds(Rng& rng) const;
};

struct MinerSpec {
    uint32_t node = 0;
    double share = 0.0;
};

/// Synthetic payments. Every node hosts one wallet with `addresses_per_node` keys.
struct Workload {
    double tx_rate = 0.0; ///< Poisson arrivals per simulated second, network-wide
    uint32_t addresses_per_node = 4;
    int64_t genesis_funding = 0; ///< base units granted to every wallet address at genesis
    uint32_t max_inputs = 3;
    int64_t fee_min = 1'000;
    int64_t fee_max = 10'000;
    double pay_fraction_min = 0.1;
    double pay_fraction_max = 0.9;
};

struct HashrateChange {
    double time = 0.0;
    double multiplier = 1.0; ///< applied to every miner's share from `time` on
};

struct SimConfig {
    uint64_t rng_seed = 1;
    uint32_t node_count = 1;
    Topology topology;
    LatencyModel latency;
    std::vector<MinerSpec> miners;
    double mean_block_interval = 600.0;
    Workload workload;
    double duration = 6000.0;
    uint64_t max_blocks = 0; ///< stop after this many blocks are found; 0 = no limit
    RewardSchedule reward;
    RetargetParams retarget;
    std::size_t block_capacity = 1000;
    std::size_t orphan_limit = 100;
    std::string signature_scheme = "simulated";
    std::vector<HashrateChange> hashrate_schedule;
    bool spy = false; ///< add a passive observer connected to every node
};

struct ConfigError : std::runtime_error {
    ConfigError(std::string key, const std::string& message)
        : std::runtime_error("config error in '" + key + "': " + message), key(std::move(key))
    {
    }
    std::string key;
};

/// Throws ConfigError naming the offending key.
void validate_config(const SimConfig& config);

nlohmann::json config_to_json(const SimConfig& config);
/// Strict: unknown keys and type mismatches raise ConfigError. Missing keys keep defaults.
SimConfig config_from_json(const nlohmann::json& j);

} // namespace blocksim
