#pragma once

#include <blocksim/netsim/config.hpp>
#include <blocksim/netsim/stats.hpp>

#include <json.hpp>

#include <cstdint>
#include <string_view>
#include <vector>

namespace blocksim {

enum class AttackKind { DoubleSpend, MajorityOvertake };

std::string_view to_string(AttackKind k);

/**
 * A block race between an attacker with hashrate share q and the honest network.
 *
 * DoubleSpend: the payment goes into the first honest block, the conflicting spend into
 * the attacker's first private block. The merchant accepts once the payment has
 * `confirmations` confirmations; the attacker publishes only after that, and only once
 * its branch leads by `publish_lead`.
 *
 * MajorityOvertake: the honest chain already holds `confirmations` blocks past the fork
 * point (the attacker's deficit, may be 0) and the attacker publishes on `publish_lead`.
 *
 * Either way the attacker starts with `premine_lead` private blocks, and a trial counts
 * as a failure once the honest chain leads by `horizon`.
 */
struct AttackSpec {
    AttackKind kind = AttackKind::DoubleSpend;
    double attacker_share = 0.1;
    uint32_t confirmations = 6;
    uint32_t premine_lead = 0;
    uint32_t publish_lead = 1;
    uint64_t trials = 1000;
    uint32_t horizon = 100;
    uint32_t jobs = 1;
    SimConfig base; ///< seed, block interval, reward and signature scheme
};

/// Throws ConfigError.
void validate_attack(const AttackSpec& spec);

struct TrialRecord {
    uint64_t index = 0;
    bool success = false;
    uint64_t honest_blocks = 0;   ///< honest blocks past the fork point when the trial ended
    uint64_t attacker_blocks = 0; ///< attacker blocks past the fork point
    double time = 0.0;            ///< simulated seconds from the payment to the end of the trial
    uint64_t reorg_depth = 0;     ///< merchant reorganization depth on success
};

struct AttackOutcome {
    AttackSpec spec;
    uint64_t success_count = 0;
    uint64_t trial_count = 0;
    double success_rate = 0.0;
    double mean_blocks_to_success = 0.0; ///< blocks mined by both sides, successful trials only
    double mean_time_to_success = 0.0;
    std::vector<TrialRecord> trials;
};

AttackOutcome run_attack(const AttackSpec& spec);
AttackOutcome run_double_spend(const AttackSpec& spec);
AttackOutcome run_majority_overtake(const AttackSpec& spec);

/// One trial, seeded with derive_seed(spec.base.rng_seed, index).
TrialRecord run_trial(const AttackSpec& spec, uint64_t index);

nlohmann::json attack_to_json(const AttackSpec& spec);
/// Strict parse of an attack block; the base config is supplied separately.
AttackSpec attack_from_json(const nlohmann::json& j, const SimConfig& base);

} // namespace blocksim
