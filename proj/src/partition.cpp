#include "mstopics/partition.hpp"

#include <numeric>
#include <unordered_map>

namespace mstopics {

Partition Partition::singletons(int n) {
    Partition p;
    p.membership.resize(n);
    std::iota(p.membership.begin(), p.membership.end(), 0);
    p.n_communities = n;
    return p;
}

Partition Partition::all_in_one(int n) {
    Partition p;
    p.membership.assign(n, 0);
    p.n_communities = n > 0 ? 1 : 0;
    return p;
}

Partition Partition::from_labels(const std::vector<int>& labels) {
    Partition p;
    p.membership.resize(labels.size());
    std::unordered_map<int, int> remap;
    remap.reserve(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const auto [it, inserted] = remap.try_emplace(labels[i], static_cast<int>(remap.size()));
        p.membership[i] = it->second;
    }
    p.n_communities = static_cast<int>(remap.size());
    return p;
}

std::vector<std::vector<int>> Partition::groups() const {
    std::vector<std::vector<int>> out(n_communities);
    for (int i = 0; i < size(); ++i) out[membership[i]].push_back(i);
    return out;
}

}  // namespace mstopics
