#pragma once

#include <blocksim/adversary/attack.hpp>
#include <blocksim/netsim/config.hpp>

#include <json.hpp>

#include <filesystem>
#include <optional>

namespace blocksim {

constexpr int kScenarioSchemaVersion = 1;

struct AnalysisOptions {
    bool clustering = true;
    bool deanon = true;
    /// Transactions injected later than this many seconds before the end of the run are
    /// left out of confirmation-wait statistics. 0 keeps every transaction.
    double confirmation_margin = 0.0;
};

/**
 * One scenario file: the simulation config at top level, plus optional `attack` and
 * `analysis` blocks. Unknown keys anywhere are rejected.
 */
struct Scenario {
    int schema_version = kScenarioSchemaVersion;
    SimConfig sim;
    std::optional<AttackSpec> attack;
    AnalysisOptions analysis;
};

/// Throws ConfigError naming the offending key.
Scenario scenario_from_json(const nlohmann::json& j);
nlohmann::json scenario_to_json(const Scenario& s);
/// Throws ConfigError for unreadable or syntactically invalid files too.
Scenario load_scenario(const std::filesystem::path& path);

} // namespace blocksim
