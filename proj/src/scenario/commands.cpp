#include <blocksim/scenario/commands.hpp>

#include <blocksim/analysis/cluster.hpp>
#include <blocksim/analysis/deanon.hpp>
#include <blocksim/analysis/metrics.hpp>
#include <blocksim/analysis/tx_graph.hpp>
#include <blocksim/chain_io.hpp>
#include <blocksim/netsim/simulation.hpp>

#include <spdlog/spdlog.h>

#include <charconv>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

namespace blocksim {

namespace fs = std::filesystem;

namespace {

std::ofstream open_output(const fs::path& dir, const char* name)
{
    fs::create_directories(dir);
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
    return out;
}

void finish(std::ofstream& out, const fs::path& dir, const char* name)
{
    out.close();
    if (!out) throw std::runtime_error("failed writing " + (dir / name).string());
    spdlog::info("wrote {}", (dir / name).string());
}

void write_resolved(const Scenario& s, const fs::path& dir)
{
    auto out = open_output(dir, "resolved-config.json");
    out << scenario_to_json(s).dump(2) << '\n';
    finish(out, dir, "resolved-config.json");
}

std::string number(double v)
{
    std::ostringstream s;
    s.precision(12);
    s << v;
    return s.str();
}

template <class T>
bool parse_number(std::string_view text, T& out)
{
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, out);
    return ec == std::errc() && ptr == end;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& path)
{
    std::ifstream in(path);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        rows.push_back(std::move(cells));
    }
    return rows;
}

} // namespace

AttackGrid parse_grid(const std::string& text)
{
    AttackGrid grid;
    std::stringstream ss(text);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        const auto colon = cell.find(':');
        double q = 0;
        uint32_t z = 0;
        if (colon == std::string::npos || !parse_number(std::string_view(cell).substr(0, colon), q) ||
            !parse_number(std::string_view(cell).substr(colon + 1), z)) {
            throw ConfigError("grid", "expected q:z pairs, got '" + cell + "'");
        }
        grid.emplace_back(q, z);
    }
    if (grid.empty()) throw ConfigError("grid", "no (q, z) cells given");
    return grid;
}

void cmd_run(const Scenario& scenario, const fs::path& out_dir)
{
    Simulation sim(scenario.sim);
    spdlog::info("simulating {} nodes for {} s (seed {})", scenario.sim.node_count, scenario.sim.duration,
                 scenario.sim.rng_seed);
    const EventTrace trace = sim.run();
    spdlog::info("{} blocks found, {} events", sim.blocks_found(), trace.records.size());

    auto tout = open_output(out_dir, "trace.jsonl");
    trace.write_jsonl(tout);
    finish(tout, out_dir, "trace.jsonl");

    // the highest final tip, lowest node id on ties
    uint32_t reference = 0;
    for (uint32_t n = 0; n < scenario.sim.node_count; ++n) {
        if (sim.node(n).chain.best_height() > sim.node(reference).chain.best_height()) reference = n;
    }
    auto cout = open_output(out_dir, "chain.jsonl");
    export_chain(sim.node(reference).chain, cout);
    finish(cout, out_dir, "chain.jsonl");

    SummaryOptions opts;
    Summary summary = summarize(trace, opts);
    if (scenario.analysis.confirmation_margin > 0.0) {
        opts.tx_cutoff = summary.end_time - scenario.analysis.confirmation_margin;
        summary = summarize(trace, opts);
    }
    auto mout = open_output(out_dir, "metrics.csv");
    write_summary_csv(summary, mout);
    finish(mout, out_dir, "metrics.csv");

    write_resolved(scenario, out_dir);
}

void cmd_attack(const Scenario& scenario, const AttackOptions& options, const fs::path& out_dir)
{
    if (!scenario.attack) throw ConfigError("attack", "the scenario has no attack block");
    AttackSpec base = *scenario.attack;
    base.base = scenario.sim;
    base.jobs = std::max<uint32_t>(1, options.jobs);
    if (options.trials) base.trials = *options.trials;
    const AttackGrid grid = options.grid ? *options.grid : AttackGrid{{base.attacker_share, base.confirmations}};
    if (grid.empty()) throw ConfigError("grid", "no (q, z) cells given");

    std::vector<AttackSpec> cells;
    for (const auto& [q, z] : grid) {
        AttackSpec s = base;
        s.attacker_share = q;
        s.confirmations = z;
        validate_attack(s);
        cells.push_back(s);
    }

    auto out = open_output(out_dir, "attack_results.csv");
    out << "q,z,trials,successes,rate,ci99_lo,ci99_hi,horizon,kind,sig_scheme,mean_blocks_to_success\n";
    for (const auto& s : cells) {
        AttackOutcome o = run_attack(s);
        const Interval ci = clopper_pearson(o.success_count, o.trial_count);
        spdlog::info("q={} z={}: {}/{} successes", s.attacker_share, s.confirmations, o.success_count, o.trial_count);
        out << number(s.attacker_share) << ',' << s.confirmations << ',' << o.trial_count << ',' << o.success_count
            << ',' << number(o.success_rate) << ',' << number(ci.lo) << ',' << number(ci.hi) << ',' << s.horizon << ','
            << to_string(s.kind) << ',' << s.base.signature_scheme << ',' << number(o.mean_blocks_to_success) << '\n';
    }
    finish(out, out_dir, "attack_results.csv");

    Scenario resolved = scenario;
    resolved.attack = base;
    write_resolved(resolved, out_dir);
}

bool cmd_analyze(const fs::path& chain_path, const fs::path& trace_path, const AnalysisOptions& options,
                 const fs::path& out_dir)
{
    std::ifstream chain_in(chain_path);
    if (!chain_in) throw UsageError("cannot read " + chain_path.string());
    std::ifstream trace_in(trace_path);
    if (!trace_in) throw UsageError("cannot read " + trace_path.string());

    TxGraph graph;
    try {
        graph = build_tx_graph(chain_in);
    } catch (const ChainParseError& e) {
        throw UsageError(chain_path.string() + ": " + e.what());
    }
    EventTrace trace;
    try {
        trace = EventTrace::read_jsonl(trace_in);
    } catch (const TraceParseError& e) {
        throw UsageError(trace_path.string() + ": " + e.what());
    }

    std::size_t cluster_count = 0, multi = 0;
    if (options.clustering) {
        ClusterSet clusters = cluster_addresses(graph);
        auto out = open_output(out_dir, "clusters.csv");
        out << "address,cluster_id\n";
        for (const auto& [addr, id] : clusters.cluster_of) out << addr.hex() << ',' << id.hex() << '\n';
        finish(out, out_dir, "clusters.csv");
        for (const auto& [_, members] : clusters.clusters()) {
            ++cluster_count;
            if (members.size() > 1) ++multi;
        }
    }

    std::optional<DeanonReport> deanon;
    if (options.deanon) {
        try {
            deanon = first_relayer_attack(trace);
        } catch (const MissingSpy&) {
            spdlog::info("trace has no spy node; skipping the first-relayer report");
        }
    }
    if (deanon) {
        auto out = open_output(out_dir, "deanon.csv");
        out << "tx,guess,truth,correct,delay_s\n";
        for (const auto& g : deanon->guesses) {
            out << g.tx.hex() << ',' << g.guess << ',' << g.truth << ',' << (g.guess == g.truth ? 1 : 0) << ','
                << number(g.delay) << '\n';
        }
        finish(out, out_dir, "deanon.csv");
    }

    TraceIndex index(trace);
    SummaryOptions opts;
    Summary summary = summarize(index, opts);
    if (options.confirmation_margin > 0.0) {
        opts.tx_cutoff = summary.end_time - options.confirmation_margin;
        summary = summarize(index, opts);
    }
    auto out = open_output(out_dir, "metrics.csv");
    write_summary_csv(summary, out);
    out << "graph,transactions," << graph.txs.size() << '\n';
    out << "graph,addresses," << graph.addresses.size() << '\n';
    if (options.clustering) {
        out << "cluster,count," << cluster_count << '\n';
        out << "cluster,multi_address," << multi << '\n';
    }
    if (deanon) {
        out << "deanon,transactions," << deanon->guesses.size() << '\n';
        out << "deanon,accuracy," << number(deanon->accuracy) << '\n';
        out << "deanon,baseline," << number(deanon->baseline) << '\n';
    }
    finish(out, out_dir, "metrics.csv");
    return deanon.has_value() || !options.deanon;
}

void cmd_report(const fs::path& dir, std::ostream& out)
{
    const fs::path metrics = dir / "metrics.csv";
    const fs::path attack = dir / "attack_results.csv";
    if (!fs::exists(metrics) && !fs::exists(attack)) {
        throw UsageError("no metrics.csv or attack_results.csv in " + dir.string());
    }

    if (fs::exists(metrics)) {
        std::map<std::string, std::vector<std::pair<std::string, std::string>>> sections;
        std::vector<std::string> order;
        auto rows = read_csv(metrics);
        for (std::size_t i = 1; i < rows.size(); ++i) {
            if (rows[i].size() != 3) continue;
            if (!sections.count(rows[i][0])) order.push_back(rows[i][0]);
            sections[rows[i][0]].emplace_back(rows[i][1], rows[i][2]);
        }
        out << "Run metrics (" << metrics.string() << ")\n";
        for (const auto& name : order) {
            out << "  [" << name << "]\n";
            for (const auto& [k, v] : sections[name]) out << "    " << std::left << std::setw(24) << k << v << '\n';
        }
    }
    if (fs::exists(attack)) {
        auto rows = read_csv(attack);
        out << "Attack results (" << attack.string() << ")\n";
        out << "    " << std::left << std::setw(8) << "q" << std::setw(6) << "z" << std::setw(10) << "trials"
            << std::setw(14) << "rate" << "99% CI\n";
        for (std::size_t i = 1; i < rows.size(); ++i) {
            const auto& r = rows[i];
            if (r.size() < 7) continue;
            out << "    " << std::setw(8) << r[0] << std::setw(6) << r[1] << std::setw(10) << r[2] << std::setw(14)
                << r[4] << '[' << r[5] << ", " << r[6] << "]\n";
        }
    }
}

} // namespace blocksim
