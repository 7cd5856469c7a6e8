#pragma once

#include <blocksim/scenario/scenario.hpp>

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace blocksim {

/// Bad invocation that is not a config defect (missing inputs, nothing to do).
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using AttackGrid = std::vector<std::pair<double, uint32_t>>;

/// "q:z,q:z,..."; throws ConfigError("grid") on bad syntax or an empty grid.
AttackGrid parse_grid(const std::string& text);

/// Writes trace.jsonl, chain.jsonl, metrics.csv and resolved-config.json.
void cmd_run(const Scenario& scenario, const std::filesystem::path& out_dir);

struct AttackOptions {
    std::optional<AttackGrid> grid; ///< defaults to the attack block's own (q, z)
    std::optional<uint64_t> trials;
    uint32_t jobs = 1;
};

/// Writes attack_results.csv (one row per grid cell) and resolved-config.json.
void cmd_attack(const Scenario& scenario, const AttackOptions& options, const std::filesystem::path& out_dir);

/// Writes clusters.csv, metrics.csv and, when the trace has a spy, deanon.csv.
/// Returns false when the deanonymization report was skipped for lack of a spy.
bool cmd_analyze(const std::filesystem::path& chain_path, const std::filesystem::path& trace_path,
                 const AnalysisOptions& options, const std::filesystem::path& out_dir);

/// Human-readable digest of the CSVs found in `dir`.
void cmd_report(const std::filesystem::path& dir, std::ostream& out);

} // namespace blocksim
