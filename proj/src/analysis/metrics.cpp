#include <blocksim/analysis/metrics.hpp>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

namespace blocksim {

namespace {

std::vector<double> waits_to(const TraceIndex& index, const Hash256& tx, int32_t node, double injected, uint32_t max_k)
{
    std::vector<double> waits;
    const auto& line = index.timeline(node);
    auto it = std::upper_bound(line.begin(), line.end(), injected,
                               [](double t, const TraceIndex::TipChange& c) { return t < c.time; });
    for (; it != line.end() && waits.size() < max_k; ++it) {
        const uint64_t conf = index.confirmations_on(tx, it->tip, it->height);
        while (waits.size() < std::min<uint64_t>(conf, max_k)) waits.push_back(it->time - injected);
    }
    return waits;
}

std::string number(double v)
{
    std::ostringstream s;
    s.precision(12);
    s << v;
    return s.str();
}

} // namespace

Summary summarize(const TraceIndex& index, const SummaryOptions& options)
{
    const EventTrace& trace = index.trace();
    Summary s;

    std::map<int32_t, MinerSummary> miners;
    if (trace.config.contains("miners")) {
        for (const auto& m : trace.config.at("miners")) {
            MinerSummary ms;
            ms.node = m.at("node").get<int32_t>();
            ms.share = m.at("share").get<double>();
            miners.emplace(ms.node, ms);
        }
    }

    Hash256 best;
    for (const auto& t : trace.final_tips) {
        if (best.is_null() || t.height > s.best_height) {
            best = t.tip;
            s.best_height = t.height;
        }
    }

    for (const auto& r : trace.records) {
        s.end_time = std::max(s.end_time, r.time);
        if (r.kind == EventKind::TxArrival) {
            if (r.status == "accepted") ++s.tx_accepted;
            if (r.status == "skipped") ++s.tx_skipped;
        }
        if ((r.kind == EventKind::BlockFound || r.kind == EventKind::BlockRelay) && r.status == "reorg") {
            ++s.reorg_depths[r.reorg_depth];
        }
    }

    for (const auto& [id, info] : index.blocks()) {
        ++s.blocks;
        auto& m = miners[info.miner];
        m.node = info.miner;
        ++m.blocks;
        if (!best.is_null() && index.is_ancestor(id, best)) {
            ++m.main_chain;
        } else {
            ++s.stale_blocks;
        }
    }
    if (s.blocks > 0) s.stale_rate = double(s.stale_blocks) / double(s.blocks);
    for (auto& [_, m] : miners) {
        if (s.blocks > 0) {
            m.fraction = double(m.blocks) / double(s.blocks);
            m.fraction_ci = clopper_pearson(m.blocks, s.blocks);
        }
        s.miners.push_back(m);
    }

    const uint32_t max_k = options.max_confirmations;
    std::vector<std::vector<double>> waits(max_k);
    std::size_t eligible = 0;
    for (const auto& [tx, node, time] : index.arrivals()) {
        if (time > options.tx_cutoff) continue;
        ++eligible;
        std::vector<double> w = waits_to(index, tx, node, time, max_k);
        for (std::size_t k = 0; k < w.size(); ++k) waits[k].push_back(w[k]);
    }
    for (uint32_t k = 0; k < max_k; ++k) {
        ConfirmationSummary c;
        c.k = k + 1;
        auto& w = waits[k];
        c.count = w.size();
        c.censored = eligible - w.size();
        if (!w.empty()) {
            double sum = 0;
            for (double x : w) sum += x;
            c.mean = sum / double(w.size());
            double var = 0;
            for (double x : w) var += (x - c.mean) * (x - c.mean);
            c.stddev = w.size() > 1 ? std::sqrt(var / double(w.size() - 1)) : 0.0;
            std::sort(w.begin(), w.end());
            const std::size_t mid = w.size() / 2;
            c.median = w.size() % 2 ? w[mid] : 0.5 * (w[mid - 1] + w[mid]);
        }
        s.confirmations.push_back(c);
    }
    return s;
}

Summary summarize(const EventTrace& trace, const SummaryOptions& options)
{
    TraceIndex index(trace);
    return summarize(index, options);
}

void write_summary_csv(const Summary& s, std::ostream& out)
{
    auto row = [&](const std::string& section, const std::string& key, const std::string& value) {
        out << section << ',' << key << ',' << value << '\n';
    };
    row("section", "key", "value");
    row("chain", "blocks", std::to_string(s.blocks));
    row("chain", "best_height", std::to_string(s.best_height));
    row("chain", "stale_blocks", std::to_string(s.stale_blocks));
    row("chain", "stale_rate", number(s.stale_rate));
    row("chain", "end_time", number(s.end_time));
    row("tx", "accepted", std::to_string(s.tx_accepted));
    row("tx", "skipped", std::to_string(s.tx_skipped));
    for (const auto& m : s.miners) {
        const std::string p = "node" + std::to_string(m.node) + ".";
        row("miner", p + "share", number(m.share));
        row("miner", p + "blocks", std::to_string(m.blocks));
        row("miner", p + "main_chain", std::to_string(m.main_chain));
        row("miner", p + "fraction", number(m.fraction));
        row("miner", p + "ci99_lo", number(m.fraction_ci.lo));
        row("miner", p + "ci99_hi", number(m.fraction_ci.hi));
    }
    for (const auto& c : s.confirmations) {
        const std::string p = "k" + std::to_string(c.k) + ".";
        row("confirmation", p + "count", std::to_string(c.count));
        row("confirmation", p + "censored", std::to_string(c.censored));
        row("confirmation", p + "mean_s", number(c.mean));
        row("confirmation", p + "stddev_s", number(c.stddev));
        row("confirmation", p + "median_s", number(c.median));
    }
    for (const auto& [depth, count] : s.reorg_depths) row("reorg", "depth" + std::to_string(depth), std::to_string(count));
}

} // namespace blocksim
