#pragma once

#include <vector>

namespace mstopics {

// Assignment of each node to a community. Labels are compact: every index in
// [0, n_communities) is used by at least one node.
struct Partition {
    std::vector<int> membership;
    int n_communities = 0;

    Partition() = default;
    Partition(std::vector<int> m, int c) : membership(std::move(m)), n_communities(c) {}

    static Partition singletons(int n);
    static Partition all_in_one(int n);

    // Compacts arbitrary labels to first-appearance order, so that two
    // partitions equal up to relabelling get identical representations
    // when built from the same node order.
    static Partition from_labels(const std::vector<int>& labels);

    int size() const { return static_cast<int>(membership.size()); }

    // Node indices per community.
    std::vector<std::vector<int>> groups() const;

    bool operator==(const Partition&) const = default;
};

}  // namespace mstopics
