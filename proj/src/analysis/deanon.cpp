#include <blocksim/analysis/deanon.hpp>

#include <unordered_map>

namespace blocksim {

DeanonReport first_relayer_attack(const EventTrace& trace)
{
    if (!trace.spy_node) throw MissingSpy();
    const int32_t spy = *trace.spy_node;

    // records are in processing order, so the first relay kept per tx is the earliest
    std::unordered_map<Hash256, std::pair<int32_t, double>, Hash256Hasher> first_relay;
    std::vector<std::tuple<Hash256, int32_t, double>> injected;
    for (const auto& r : trace.records) {
        if (r.kind == EventKind::TxRelay && r.node == spy) {
            first_relay.emplace(r.object, std::make_pair(r.from, r.time));
        } else if (r.kind == EventKind::TxArrival && r.status == "accepted") {
            injected.emplace_back(r.object, r.node, r.time);
        }
    }

    DeanonReport report;
    report.baseline = trace.node_count > 0 ? 1.0 / trace.node_count : 0.0;
    for (const auto& [tx, node, time] : injected) {
        auto it = first_relay.find(tx);
        if (it == first_relay.end()) continue;
        DeanonGuess g{tx, it->second.first, node, it->second.second - time};
        if (g.guess == g.truth) ++report.correct;
        report.guesses.push_back(g);
    }
    if (!report.guesses.empty()) report.accuracy = double(report.correct) / double(report.guesses.size());
    return report;
}

} // namespace blocksim
