#pragma once

#include "mstopics/markov_stability.hpp"
#include "mstopics/partition.hpp"
#include "mstopics/partition_metrics.hpp"

#include <string>
#include <vector>

namespace mstopics {

// A Markov-time interval where the optimized partitions agree with each
// other, plus the representative partition picked at the VI(t) dip.
struct RobustScale {
    double t_star = 0.0;
    Partition partition;
    int n_communities = 0;
    int index_lo = 0;  // grid indices of the plateau
    int index_hi = 0;
    double t_lo = 0.0;
    double t_hi = 0.0;
    double dip_depth = 0.0;       // VI(t) prominence within the dip window
    double plateau_score = 0.0;   // mean cross-time VI inside the plateau
};

struct ScaleSelectionParams {
    // Negative means auto: 0.1 times the largest ensemble VI(t) in the scan.
    // Keyed to the dispersion curve, not the cross-time matrix, so that a
    // short transition regime next to a long plateau cannot slip under the
    // threshold by dilution.
    double plateau_threshold = -1.0;
    int min_plateau_len = 5;
    int dip_window = 3;
};

// Plateau detection first (contiguous runs of mutually similar partitions),
// then the VI(t) dip picks t_star inside each plateau. Output is ordered
// coarse to fine and deduplicated (no two entries with identical partitions).
std::vector<RobustScale> find_robust_scales(const StabilityScan& scan, const CrossTimeVI& cross,
                                            const ScaleSelectionParams& params);

struct PartitionFlow {
    int fine = 0;
    int coarse = 0;
    int count = 0;

    bool operator==(const PartitionFlow&) const = default;
};

struct LabelFlow {
    int fine = 0;
    std::string category;
    int count = 0;

    bool operator==(const LabelFlow&) const = default;
};

// Node-membership flows between a finer and a coarser grouping, for Sankey
// style summaries. Rows with zero count are omitted.
std::vector<PartitionFlow> sankey_flows(const Partition& fine, const Partition& coarse);
std::vector<LabelFlow> sankey_flows(const Partition& fine, const LabelSet& labels,
                                    const std::vector<std::string>& ids);

// Fraction of fine clusters placing at least `mass` of their nodes inside a
// single coarse cluster. Diagnostic only.
double quasi_hierarchy_fraction(const Partition& fine, const Partition& coarse,
                                double mass = 0.9);

}  // namespace mstopics
