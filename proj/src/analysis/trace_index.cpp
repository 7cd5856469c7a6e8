#include <blocksim/analysis/trace_index.hpp>

#include <algorithm>
#include <stdexcept>

namespace blocksim {

TraceIndex::TraceIndex(const EventTrace& trace) : trace_(trace)
{
    for (const auto& r : trace.records) {
        switch (r.kind) {
        case EventKind::BlockFound: {
            if (r.status != "invalid") {
                BlockInfo info;
                info.parent = r.parent;
                info.height = r.height;
                info.miner = r.node;
                info.found_at = r.time;
                info.txids = r.txids;
                for (const auto& tx : r.txids) containing_[tx].push_back(r.object);
                blocks_.emplace(r.object, std::move(info));
            }
            [[fallthrough]];
        }
        case EventKind::BlockRelay: {
            block_seen_[r.object].emplace(r.node, r.time);
            auto& line = timelines_[r.node];
            if (line.empty() || line.back().tip != r.tip) line.push_back(TipChange{r.time, r.seq, r.tip, r.tip_height});
            break;
        }
        case EventKind::TxArrival:
            if (r.status == "accepted") {
                source_.emplace(r.object, r.node);
                arrivals_.emplace_back(r.object, r.node, r.time);
            }
            [[fallthrough]];
        case EventKind::TxRelay:
            if (!r.object.is_null()) first_seen_[r.object].emplace(r.node, r.time);
            break;
        case EventKind::Scheduled:
            break;
        }
    }

    // Binary lifting over the block tree; parents are always found before children.
    std::vector<std::pair<uint64_t, Hash256>> by_height;
    by_height.reserve(blocks_.size());
    for (const auto& [id, info] : blocks_) by_height.emplace_back(info.height, id);
    std::sort(by_height.begin(), by_height.end());
    for (const auto& [height, id] : by_height) {
        std::vector<Hash256>& up = jumps_[id];
        const Hash256& parent = blocks_.at(id).parent;
        if (!blocks_.count(parent)) continue;
        up.push_back(parent);
        for (std::size_t i = 0;; ++i) {
            const auto it = jumps_.find(up[i]);
            if (it == jumps_.end() || it->second.size() <= i) break;
            up.push_back(it->second[i]);
        }
    }
}

const TraceIndex::BlockInfo* TraceIndex::block(const Hash256& id) const
{
    auto it = blocks_.find(id);
    return it == blocks_.end() ? nullptr : &it->second;
}

const std::vector<TraceIndex::TipChange>& TraceIndex::timeline(int32_t node) const
{
    static const std::vector<TipChange> empty;
    auto it = timelines_.find(node);
    return it == timelines_.end() ? empty : it->second;
}

TraceIndex::TipChange TraceIndex::tip_at(int32_t node, double time) const
{
    const auto& line = timeline(node);
    auto it = std::upper_bound(line.begin(), line.end(), time,
                               [](double t, const TipChange& c) { return t < c.time; });
    if (it == line.begin()) return TipChange{};
    return *std::prev(it);
}

Hash256 TraceIndex::ancestor_at(Hash256 id, uint64_t height) const
{
    const BlockInfo* info = block(id);
    if (!info || info->height < height) return Hash256{};
    uint64_t steps = info->height - height;
    for (std::size_t i = 0; steps > 0; ++i, steps >>= 1) {
        if (!(steps & 1)) continue;
        const auto& up = jumps_.at(id);
        if (up.size() <= i) return Hash256{};
        id = up[i];
    }
    return id;
}

bool TraceIndex::is_ancestor(const Hash256& ancestor, const Hash256& descendant) const
{
    const BlockInfo* a = block(ancestor);
    if (!a) return false;
    return ancestor_at(descendant, a->height) == ancestor;
}

const std::vector<Hash256>& TraceIndex::blocks_containing(const Hash256& tx) const
{
    static const std::vector<Hash256> none;
    auto it = containing_.find(tx);
    return it == containing_.end() ? none : it->second;
}

std::optional<double> TraceIndex::first_seen(const Hash256& tx, int32_t node) const
{
    auto it = first_seen_.find(tx);
    if (it == first_seen_.end()) return std::nullopt;
    auto jt = it->second.find(node);
    if (jt == it->second.end()) return std::nullopt;
    return jt->second;
}

std::optional<double> TraceIndex::block_seen(const Hash256& block, int32_t node) const
{
    auto it = block_seen_.find(block);
    if (it == block_seen_.end()) return std::nullopt;
    auto jt = it->second.find(node);
    if (jt == it->second.end()) return std::nullopt;
    return jt->second;
}

std::optional<int32_t> TraceIndex::source(const Hash256& tx) const
{
    auto it = source_.find(tx);
    if (it == source_.end()) return std::nullopt;
    return it->second;
}

uint64_t TraceIndex::confirmations_on(const Hash256& tx, const Hash256& tip, uint64_t tip_height) const
{
    for (const auto& b : blocks_containing(tx)) {
        if (is_ancestor(b, tip)) return tip_height - block(b)->height + 1;
    }
    return 0;
}

std::optional<uint64_t> confirmations(const TraceIndex& index, const Hash256& tx, int32_t node, double time)
{
    const TraceIndex::TipChange tip = index.tip_at(node, time);
    const uint64_t conf = tip.tip.is_null() ? 0 : index.confirmations_on(tx, tip.tip, tip.height);
    if (conf > 0) return conf;
    auto seen = index.first_seen(tx, node);
    if (seen && *seen <= time) return 0;
    for (const auto& b : index.blocks_containing(tx)) {
        auto got = index.block_seen(b, node);
        if (got && *got <= time) return 0;
    }
    return std::nullopt;
}

} // namespace blocksim
