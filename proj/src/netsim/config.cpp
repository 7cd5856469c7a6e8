#include <blocksim/netsim/config.hpp>
#include <blocksim/netsim/json_fields.hpp>

#include <cmath>
#include <set>

namespace blocksim {

using nlohmann::json;

double LatencyModel::sample_seconds(Rng& rng) const
{
    if (kind == Kind::Constant) return lo_ms / 1000.0;
    return rng.uniform(lo_ms, hi_ms) / 1000.0;
}

void validate_config(const SimConfig& c)
{
    auto require = [](bool cond, const char* key, const std::string& msg) {
        if (!cond) throw ConfigError(key, msg);
    };
    require(c.node_count >= 1, "nodes", "at least one node is required");
    require(c.topology.p >= 0.0 && c.topology.p <= 1.0, "topology", "edge probability must lie in [0, 1]");
    require(c.latency.lo_ms >= 0.0 && std::isfinite(c.latency.lo_ms), "latency", "latency must be non-negative");
    if (c.latency.kind == LatencyModel::Kind::Uniform) {
        require(c.latency.hi_ms >= c.latency.lo_ms && std::isfinite(c.latency.hi_ms), "latency", "need lo_ms <= hi_ms");
    }
    double total = 0.0;
    std::set<uint32_t> miner_nodes;
    for (const auto& m : c.miners) {
        require(m.node < c.node_count, "miners", "miner node " + std::to_string(m.node) + " does not exist");
        require(m.share >= 0.0 && m.share <= 1.0, "miners", "hashrate share must lie in [0, 1]");
        require(miner_nodes.insert(m.node).second, "miners", "node listed twice");
        total += m.share;
    }
    require(total <= 1.0 + 1e-9, "miners", "hashrate shares sum to " + std::to_string(total) + " > 1");
    require(c.mean_block_interval > 0.0, "mean_block_interval", "must be positive");
    require(c.duration >= 0.0, "duration", "must be non-negative");

    const Workload& w = c.workload;
    require(w.tx_rate >= 0.0, "workload.tx_rate", "must be non-negative");
    require(w.addresses_per_node >= 1, "workload.addresses_per_node", "must be at least 1");
    require(w.genesis_funding >= 0, "workload.genesis_funding", "must be non-negative");
    require(w.max_inputs >= 1, "workload.max_inputs", "must be at least 1");
    require(w.fee_min >= 0 && w.fee_max >= w.fee_min, "workload.fee_min", "need 0 <= fee_min <= fee_max");
    require(w.pay_fraction_min > 0.0 && w.pay_fraction_max <= 1.0 && w.pay_fraction_min <= w.pay_fraction_max,
            "workload.pay_fraction_min", "need 0 < min <= max <= 1");

    require(c.reward.halving_interval >= 1, "reward.halving_interval", "must be positive");
    require(!c.retarget.enabled || c.retarget.window >= 1, "retarget.window", "must be positive");
    require(c.retarget.desired_interval > 0.0, "retarget.desired_interval", "must be positive");
    require(c.signature_scheme == "simulated" || c.signature_scheme == "ed25519", "signature_scheme",
            "expected 'simulated' or 'ed25519'");
    for (const auto& h : c.hashrate_schedule) {
        require(h.time >= 0.0 && h.multiplier > 0.0, "hashrate_schedule", "need time >= 0 and multiplier > 0");
    }
}

namespace {

std::string topology_name(TopologyKind k)
{
    switch (k) {
    case TopologyKind::Complete: return "complete";
    case TopologyKind::Random: return "random";
    case TopologyKind::Ring: return "ring";
    case TopologyKind::Star: return "star";
    }
    return "complete";
}

} // namespace

json config_to_json(const SimConfig& c)
{
    json j;
    j["seed"] = c.rng_seed;
    j["nodes"] = c.node_count;
    j["topology"] = {{"kind", topology_name(c.topology.kind)}};
    if (c.topology.kind == TopologyKind::Random) j["topology"]["p"] = c.topology.p;
    if (c.latency.kind == LatencyModel::Kind::Constant) {
        j["latency"] = {{"kind", "constant"}, {"ms", c.latency.lo_ms}};
    } else {
        j["latency"] = {{"kind", "uniform"}, {"lo_ms", c.latency.lo_ms}, {"hi_ms", c.latency.hi_ms}};
    }
    j["miners"] = json::array();
    for (const auto& m : c.miners) j["miners"].push_back({{"node", m.node}, {"share", m.share}});
    j["mean_block_interval"] = c.mean_block_interval;
    const Workload& w = c.workload;
    j["workload"] = {{"tx_rate", w.tx_rate},
                     {"addresses_per_node", w.addresses_per_node},
                     {"genesis_funding", w.genesis_funding},
                     {"max_inputs", w.max_inputs},
                     {"fee_min", w.fee_min},
                     {"fee_max", w.fee_max},
                     {"pay_fraction_min", w.pay_fraction_min},
                     {"pay_fraction_max", w.pay_fraction_max}};
    j["duration"] = c.duration;
    j["max_blocks"] = c.max_blocks;
    j["reward"] = {{"initial", c.reward.initial_reward.units()}, {"halving_interval", c.reward.halving_interval}};
    j["retarget"] = {{"enabled", c.retarget.enabled},
                     {"window", c.retarget.window},
                     {"desired_interval", c.retarget.desired_interval}};
    j["block_capacity"] = c.block_capacity;
    j["orphan_limit"] = c.orphan_limit;
    j["signature_scheme"] = c.signature_scheme;
    j["hashrate_schedule"] = json::array();
    for (const auto& h : c.hashrate_schedule) {
        j["hashrate_schedule"].push_back({{"time", h.time}, {"multiplier", h.multiplier}});
    }
    j["spy"] = c.spy;
    return j;
}

SimConfig config_from_json(const json& j)
{
    SimConfig c;
    JsonFields root(j, "",
                {"seed", "nodes", "topology", "latency", "miners", "mean_block_interval", "workload", "duration",
                 "max_blocks", "reward", "retarget", "block_capacity", "orphan_limit", "signature_scheme",
                 "hashrate_schedule", "spy"});
    root.read("seed", c.rng_seed);
    root.read("nodes", c.node_count);
    root.read("mean_block_interval", c.mean_block_interval);
    root.read("duration", c.duration);
    root.read("max_blocks", c.max_blocks);
    root.read("block_capacity", c.block_capacity);
    root.read("orphan_limit", c.orphan_limit);
    root.read("signature_scheme", c.signature_scheme);
    root.read("spy", c.spy);

    if (root.has("topology")) {
        const json& t = root.at("topology");
        std::string kind;
        if (t.is_string()) {
            kind = t.get<std::string>();
        } else {
            JsonFields tf(t, "topology", {"kind", "p"});
            tf.read("kind", kind);
            tf.read("p", c.topology.p);
        }
        if (kind == "complete") c.topology.kind = TopologyKind::Complete;
        else if (kind == "random") c.topology.kind = TopologyKind::Random;
        else if (kind == "ring") c.topology.kind = TopologyKind::Ring;
        else if (kind == "star") c.topology.kind = TopologyKind::Star;
        else throw ConfigError("topology.kind", "expected complete, random, ring or star");
    }

    if (root.has("latency")) {
        JsonFields lf(root.at("latency"), "latency", {"kind", "ms", "lo_ms", "hi_ms"});
        std::string kind = "constant";
        lf.read("kind", kind);
        if (kind == "constant") {
            c.latency.kind = LatencyModel::Kind::Constant;
            lf.read("ms", c.latency.lo_ms);
        } else if (kind == "uniform") {
            c.latency.kind = LatencyModel::Kind::Uniform;
            lf.read("lo_ms", c.latency.lo_ms);
            lf.read("hi_ms", c.latency.hi_ms);
        } else {
            throw ConfigError("latency.kind", "expected constant or uniform");
        }
    }

    if (root.has("miners")) {
        const json& ms = root.at("miners");
        if (!ms.is_array()) throw ConfigError("miners", "expected an array");
        for (const auto& m : ms) {
            JsonFields mf(m, "miners", {"node", "share"});
            MinerSpec spec;
            mf.read("node", spec.node);
            mf.read("share", spec.share);
            c.miners.push_back(spec);
        }
    }

    if (root.has("workload")) {
        JsonFields wf(root.at("workload"), "workload",
                  {"tx_rate", "addresses_per_node", "genesis_funding", "max_inputs", "fee_min", "fee_max",
                   "pay_fraction_min", "pay_fraction_max"});
        Workload& w = c.workload;
        wf.read("tx_rate", w.tx_rate);
        wf.read("addresses_per_node", w.addresses_per_node);
        wf.read("genesis_funding", w.genesis_funding);
        wf.read("max_inputs", w.max_inputs);
        wf.read("fee_min", w.fee_min);
        wf.read("fee_max", w.fee_max);
        wf.read("pay_fraction_min", w.pay_fraction_min);
        wf.read("pay_fraction_max", w.pay_fraction_max);
    }

    if (root.has("reward")) {
        JsonFields rf(root.at("reward"), "reward", {"initial", "halving_interval"});
        int64_t initial = c.reward.initial_reward.units();
        rf.read("initial", initial);
        if (initial < 0) throw ConfigError("reward.initial", "must be non-negative");
        c.reward.initial_reward = Amount(initial);
        rf.read("halving_interval", c.reward.halving_interval);
    }

    if (root.has("retarget")) {
        JsonFields rf(root.at("retarget"), "retarget", {"enabled", "window", "desired_interval"});
        rf.read("enabled", c.retarget.enabled);
        rf.read("window", c.retarget.window);
        rf.read("desired_interval", c.retarget.desired_interval);
    }

    if (root.has("hashrate_schedule")) {
        const json& hs = root.at("hashrate_schedule");
        if (!hs.is_array()) throw ConfigError("hashrate_schedule", "expected an array");
        for (const auto& h : hs) {
            JsonFields hf(h, "hashrate_schedule", {"time", "multiplier"});
            HashrateChange change;
            hf.read("time", change.time);
            hf.read("multiplier", change.multiplier);
            c.hashrate_schedule.push_back(change);
        }
    }
    return c;
}

} // namespace blocksim
