#include <blocksim/analysis/cluster.hpp>

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace blocksim {

namespace {

class DisjointSets
{
public:
    explicit DisjointSets(std::size_t n) : parent_(n), rank_(n, 0) { std::iota(parent_.begin(), parent_.end(), 0); }

    std::size_t find(std::size_t x)
    {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    bool unite(std::size_t a, std::size_t b)
    {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (rank_[a] < rank_[b]) std::swap(a, b);
        parent_[b] = a;
        if (rank_[a] == rank_[b]) ++rank_[a];
        return true;
    }

private:
    std::vector<std::size_t> parent_;
    std::vector<uint8_t> rank_;
};

} // namespace

std::size_t ClusterSet::cluster_count() const
{
    std::set<Address> ids;
    for (const auto& [_, id] : cluster_of) ids.insert(id);
    return ids.size();
}

std::map<Address, std::vector<Address>> ClusterSet::clusters() const
{
    std::map<Address, std::vector<Address>> out;
    for (const auto& [addr, id] : cluster_of) out[id].push_back(addr);
    return out;
}

ClusterSet cluster_input_sets(const std::set<Address>& addresses,
                              const std::vector<std::pair<Hash256, std::vector<Address>>>& input_sets)
{
    std::vector<Address> members(addresses.begin(), addresses.end());
    auto slot = [&](const Address& a) {
        auto it = std::lower_bound(members.begin(), members.end(), a);
        if (it == members.end() || *it != a) throw std::invalid_argument("input address missing from address set");
        return static_cast<std::size_t>(it - members.begin());
    };

    DisjointSets sets(members.size());
    std::vector<std::pair<Hash256, std::size_t>> merges; // tx, one member of the merged set
    for (const auto& [tx, inputs] : input_sets) {
        if (inputs.empty()) continue;
        const std::size_t first = slot(inputs.front());
        bool merged = false;
        for (std::size_t i = 1; i < inputs.size(); ++i) merged |= sets.unite(first, slot(inputs[i]));
        if (merged) merges.emplace_back(tx, first);
    }

    // members are sorted, so the first member seen for each root is the smallest
    ClusterSet out;
    std::vector<const Address*> name(members.size(), nullptr);
    for (std::size_t i = 0; i < members.size(); ++i) {
        const std::size_t root = sets.find(i);
        if (!name[root]) name[root] = &members[i];
        out.cluster_of.emplace(members[i], *name[root]);
    }
    for (const auto& [tx, member] : merges) out.merged_by[*name[sets.find(member)]].push_back(tx);
    return out;
}

ClusterSet cluster_addresses(const TxGraph& graph)
{
    std::vector<std::pair<Hash256, std::vector<Address>>> input_sets;
    input_sets.reserve(graph.txs.size());
    for (const auto& t : graph.txs) {
        if (!t.coinbase) input_sets.emplace_back(t.id, t.input_addresses());
    }
    return cluster_input_sets(graph.addresses, input_sets);
}

} // namespace blocksim
