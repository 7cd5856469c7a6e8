#include <blocksim/chain_io.hpp>
#include <blocksim/netsim/trace.hpp>
#include <blocksim/scenario/commands.hpp>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <iostream>

namespace {

constexpr int kOk = 0;
constexpr int kRuntimeFailure = 1;
constexpr int kUsageError = 2;

void setup_logging()
{
    auto logger = spdlog::stderr_color_mt("blocksim");
    spdlog::set_default_logger(logger);
    spdlog::set_pattern("%^[%l]%$ %v");
    spdlog::set_level(spdlog::level::warn);
    if (const char* level = std::getenv("BLOCKSIM_LOG")) {
        auto parsed = spdlog::level::from_str(level);
        // from_str maps unknown names to off; only honor it when asked for explicitly
        if (parsed != spdlog::level::off || std::string_view(level) == "off") spdlog::set_level(parsed);
    }
}

blocksim::Scenario load_with_seed(const std::string& path, const std::optional<uint64_t>& seed)
{
    blocksim::Scenario s = blocksim::load_scenario(path);
    if (seed) {
        s.sim.rng_seed = *seed;
        if (s.attack) s.attack->base.rng_seed = *seed;
    }
    return s;
}

} // namespace

int main(int argc, char** argv)
{
    setup_logging();

    CLI::App app{"Discrete-event proof-of-work blockchain simulator"};
    app.require_subcommand(1);

    std::string scenario_path, out_dir, chain_path, trace_path, grid_text;
    std::optional<uint64_t> seed, trials;
    uint32_t jobs = 1;

    auto* run = app.add_subcommand("run", "Simulate a network and write its trace, chain and metrics");
    run->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
    run->add_option("--out", out_dir, "Output directory")->required();
    run->add_option("--seed", seed, "Override the scenario seed");

    auto* attack = app.add_subcommand("attack", "Run attack trials over a grid of (q, z) cells");
    attack->add_option("--scenario", scenario_path, "Scenario JSON file with an attack block")->required();
    attack->add_option("--out", out_dir, "Output directory")->required();
    attack->add_option("--seed", seed, "Override the scenario seed");
    attack->add_option("--trials", trials, "Trials per cell");
    attack->add_option("--jobs", jobs, "Worker threads")->check(CLI::Range(1u, 1024u));
    attack->add_option("--grid", grid_text, "Cells as q:z,q:z,...");

    auto* analyze = app.add_subcommand("analyze", "Cluster addresses and score the first-relayer attack");
    analyze->add_option("--chain", chain_path, "chain.jsonl from a run")->required();
    analyze->add_option("--trace", trace_path, "trace.jsonl from a run")->required();
    analyze->add_option("--out", out_dir, "Output directory")->required();
    analyze->add_option("--scenario", scenario_path, "Scenario whose analysis block to apply");

    auto* report = app.add_subcommand("report", "Print a readable summary of the CSVs in a directory");
    report->add_option("--out", out_dir, "Directory holding metrics.csv or attack_results.csv")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsageError;
    }

    try {
        if (*run) {
            blocksim::cmd_run(load_with_seed(scenario_path, seed), out_dir);
        } else if (*attack) {
            blocksim::AttackOptions opts;
            if (attack->count("--grid")) opts.grid = blocksim::parse_grid(grid_text);
            opts.trials = trials;
            opts.jobs = jobs;
            blocksim::cmd_attack(load_with_seed(scenario_path, seed), opts, out_dir);
        } else if (*analyze) {
            blocksim::AnalysisOptions opts;
            if (!scenario_path.empty()) opts = blocksim::load_scenario(scenario_path).analysis;
            if (!blocksim::cmd_analyze(chain_path, trace_path, opts, out_dir)) {
                std::cerr << "notice: trace has no spy node, deanon.csv not written\n";
            }
        } else if (*report) {
            blocksim::cmd_report(out_dir, std::cout);
        }
    } catch (const blocksim::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const blocksim::ChainParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const blocksim::TraceParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const blocksim::UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kRuntimeFailure;
    }
    return kOk;
}
