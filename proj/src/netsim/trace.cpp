#include <blocksim/netsim/trace.hpp>

#include <istream>
#include <ostream>

namespace blocksim {

using nlohmann::json;

std::string_view to_string(EventKind k)
{
    switch (k) {
    case EventKind::TxArrival: return "TxArrival";
    case EventKind::TxRelay: return "TxRelay";
    case EventKind::BlockFound: return "BlockFound";
    case EventKind::BlockRelay: return "BlockRelay";
    case EventKind::Scheduled: return "Scheduled";
    }
    return "Scheduled";
}

std::optional<EventKind> event_kind_from_string(std::string_view s)
{
    for (auto k : {EventKind::TxArrival, EventKind::TxRelay, EventKind::BlockFound, EventKind::BlockRelay,
                   EventKind::Scheduled}) {
        if (to_string(k) == s) return k;
    }
    return std::nullopt;
}

namespace {

bool is_block_event(EventKind k)
{
    return k == EventKind::BlockFound || k == EventKind::BlockRelay;
}

json record_to_json(const TraceRecord& r)
{
    json j;
    j["kind"] = to_string(r.kind);
    j["t"] = r.time;
    j["seq"] = r.seq;
    if (r.kind == EventKind::Scheduled) {
        j["multiplier"] = r.multiplier;
        return j;
    }
    j["node"] = r.node;
    if (r.from >= 0) j["from"] = r.from;
    j["id"] = r.object.hex();
    j["status"] = r.status;
    if (r.kind == EventKind::BlockFound) {
        j["parent"] = r.parent.hex();
        j["height"] = r.height;
        json txs = json::array();
        for (const auto& t : r.txids) txs.push_back(t.hex());
        j["txs"] = std::move(txs);
    }
    if (is_block_event(r.kind)) {
        j["tip"] = r.tip.hex();
        j["tip_height"] = r.tip_height;
        if (r.reorg_depth > 0) j["reorg_depth"] = r.reorg_depth;
    }
    return j;
}

Hash256 hash_at(const json& j, const char* key)
{
    auto h = Hash256::from_hex(j.at(key).get<std::string>());
    if (!h) throw std::invalid_argument(std::string("bad hash in '") + key + "'");
    return *h;
}

TraceRecord record_from_json(const json& j, EventKind kind)
{
    TraceRecord r;
    r.kind = kind;
    r.time = j.at("t").get<double>();
    r.seq = j.at("seq").get<uint64_t>();
    if (kind == EventKind::Scheduled) {
        r.multiplier = j.at("multiplier").get<double>();
        return r;
    }
    r.node = j.at("node").get<int32_t>();
    if (j.contains("from")) r.from = j.at("from").get<int32_t>();
    r.object = hash_at(j, "id");
    r.status = j.at("status").get<std::string>();
    if (kind == EventKind::BlockFound) {
        r.parent = hash_at(j, "parent");
        r.height = j.at("height").get<uint64_t>();
        for (const auto& t : j.at("txs")) {
            auto h = Hash256::from_hex(t.get<std::string>());
            if (!h) throw std::invalid_argument("bad tx id in 'txs'");
            r.txids.push_back(*h);
        }
    }
    if (is_block_event(kind)) {
        r.tip = hash_at(j, "tip");
        r.tip_height = j.at("tip_height").get<uint64_t>();
        if (j.contains("reorg_depth")) r.reorg_depth = j.at("reorg_depth").get<uint32_t>();
    }
    return r;
}

} // namespace

void EventTrace::write_jsonl(std::ostream& out) const
{
    json meta;
    meta["kind"] = "Meta";
    meta["sig_scheme"] = sig_scheme;
    meta["node_count"] = node_count;
    meta["spy"] = spy_node ? json(*spy_node) : json(nullptr);
    meta["config"] = config;
    out << meta.dump() << '\n';
    for (const auto& r : records) out << record_to_json(r).dump() << '\n';
    for (const auto& t : final_tips) {
        json f{{"kind", "Final"}, {"node", t.node}, {"tip", t.tip.hex()}, {"tip_height", t.height}};
        out << f.dump() << '\n';
    }
}

EventTrace EventTrace::read_jsonl(std::istream& in)
{
    EventTrace trace;
    std::string line;
    std::size_t lineno = 0;
    bool have_meta = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            json j = json::parse(line);
            std::string kind = j.at("kind").get<std::string>();
            if (kind == "Meta") {
                if (have_meta) throw std::invalid_argument("duplicate Meta line");
                have_meta = true;
                trace.sig_scheme = j.at("sig_scheme").get<std::string>();
                trace.node_count = j.at("node_count").get<uint32_t>();
                if (!j.at("spy").is_null()) trace.spy_node = j.at("spy").get<int32_t>();
                trace.config = j.at("config");
                continue;
            }
            if (!have_meta) throw std::invalid_argument("trace must start with a Meta line");
            if (kind == "Final") {
                trace.final_tips.push_back(
                    NodeTip{j.at("node").get<int32_t>(), hash_at(j, "tip"), j.at("tip_height").get<uint64_t>()});
                continue;
            }
            auto ek = event_kind_from_string(kind);
            if (!ek) throw std::invalid_argument("unknown event kind '" + kind + "'");
            trace.records.push_back(record_from_json(j, *ek));
        } catch (const std::exception& e) {
            throw TraceParseError(lineno, e.what());
        }
    }
    if (!have_meta) throw TraceParseError(lineno, "missing Meta line");
    return trace;
}

} // namespace blocksim
