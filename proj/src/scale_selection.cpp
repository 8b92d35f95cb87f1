#include "mstopics/scale_selection.hpp"

#include "mstopics/errors.hpp"

#include <algorithm>
#include <map>

namespace mstopics {

namespace {

double plateau_mean(const Eigen::MatrixXd& cross, int lo, int hi) {
    // Mean over off-diagonal pairs; the zero diagonal would only dilute it.
    const int len = hi - lo + 1;
    if (len < 2) return 0.0;
    double total = 0.0;
    for (int a = lo; a <= hi; ++a) {
        for (int b = a + 1; b <= hi; ++b) total += cross(a, b);
    }
    return total / (0.5 * len * (len - 1));
}

}  // namespace

std::vector<RobustScale> find_robust_scales(const StabilityScan& scan, const CrossTimeVI& cross,
                                            const ScaleSelectionParams& params) {
    const int m = static_cast<int>(scan.records.size());
    if (m == 0) throw ValidationError("find_robust_scales: empty scan");
    if (static_cast<int>(cross.t_grid.size()) != m || cross.matrix.rows() != m) {
        throw ValidationError("find_robust_scales: scan and cross-VI grids differ");
    }
    for (int i = 0; i < m; ++i) {
        if (scan.records[i].t != cross.t_grid[i]) {
            throw ValidationError("find_robust_scales: scan and cross-VI grids differ");
        }
    }
    if (params.min_plateau_len < 2) {
        throw ValidationError("find_robust_scales: min_plateau_len must be at least 2");
    }
    if (m < params.min_plateau_len) {
        throw ValidationError("find_robust_scales: grid shorter than min_plateau_len");
    }
    if (params.dip_window < 1) {
        throw ValidationError("find_robust_scales: dip_window must be positive");
    }

    double threshold = params.plateau_threshold;
    if (threshold < 0.0) {
        double max_vi = 0.0;
        for (const auto& rec : scan.records) max_vi = std::max(max_vi, rec.ensemble_vi);
        threshold = 0.1 * max_vi;
    }
    if (threshold <= 0.0) {
        // Unanimous ensembles: only runs of identical best partitions qualify.
        threshold = 1e-12;
    }

    // Greedy left-to-right: at each start, grow the interval while its mean
    // stays under the threshold, emit if long enough, continue after it.
    std::vector<RobustScale> scales;
    int i = 0;
    while (i + params.min_plateau_len - 1 < m) {
        int j = i + params.min_plateau_len - 1;
        if (plateau_mean(cross.matrix, i, j) >= threshold) {
            ++i;
            continue;
        }
        while (j + 1 < m && plateau_mean(cross.matrix, i, j + 1) < threshold) ++j;

        RobustScale scale;
        scale.index_lo = i;
        scale.index_hi = j;
        scale.t_lo = scan.records[i].t;
        scale.t_hi = scan.records[j].t;
        scale.plateau_score = plateau_mean(cross.matrix, i, j);

        int star = i;
        for (int a = i + 1; a <= j; ++a) {
            if (scan.records[a].ensemble_vi < scan.records[star].ensemble_vi) star = a;
        }
        scale.t_star = scan.records[star].t;
        scale.partition = scan.records[star].best;
        scale.n_communities = scan.records[star].n_communities;

        const int half = params.dip_window / 2;
        double window_max = scan.records[star].ensemble_vi;
        for (int a = std::max(0, star - half); a <= std::min(m - 1, star + half); ++a) {
            window_max = std::max(window_max, scan.records[a].ensemble_vi);
        }
        scale.dip_depth = window_max - scan.records[star].ensemble_vi;

        scales.push_back(std::move(scale));
        i = j + 1;
    }

    // Merge candidates that found the same partition at different plateaux:
    // keep the longer plateau, then the lower mean, then the smaller time.
    std::vector<RobustScale> unique;
    for (auto& candidate : scales) {
        bool duplicate = false;
        for (auto& kept : unique) {
            if (variation_of_information(candidate.partition, kept.partition) == 0.0) {
                const int kept_len = kept.index_hi - kept.index_lo;
                const int cand_len = candidate.index_hi - candidate.index_lo;
                const bool replace =
                    cand_len > kept_len ||
                    (cand_len == kept_len && candidate.plateau_score < kept.plateau_score) ||
                    (cand_len == kept_len && candidate.plateau_score == kept.plateau_score &&
                     candidate.t_star < kept.t_star);
                if (replace) kept = std::move(candidate);
                duplicate = true;
                break;
            }
        }
        if (!duplicate) unique.push_back(std::move(candidate));
    }

    std::sort(unique.begin(), unique.end(), [](const RobustScale& a, const RobustScale& b) {
        if (a.n_communities != b.n_communities) return a.n_communities < b.n_communities;
        return a.t_star > b.t_star;
    });
    return unique;
}

std::vector<PartitionFlow> sankey_flows(const Partition& fine, const Partition& coarse) {
    if (fine.size() != coarse.size()) {
        throw ValidationError("sankey_flows: partitions cover different document sets");
    }
    if (fine.size() == 0) throw ValidationError("sankey_flows: empty partitions");

    std::map<std::pair<int, int>, int> counts;
    for (int i = 0; i < fine.size(); ++i) {
        ++counts[{fine.membership[i], coarse.membership[i]}];
    }
    std::vector<PartitionFlow> flows;
    flows.reserve(counts.size());
    for (const auto& [key, count] : counts) flows.push_back({key.first, key.second, count});
    return flows;
}

std::vector<LabelFlow> sankey_flows(const Partition& fine, const LabelSet& labels,
                                    const std::vector<std::string>& ids) {
    const auto aligned = align_labels(labels, fine, ids);
    std::map<std::pair<int, int>, int> counts;
    for (int i = 0; i < aligned.coverage; ++i) {
        ++counts[{aligned.community_of[i], aligned.label_of[i]}];
    }
    std::vector<LabelFlow> flows;
    flows.reserve(counts.size());
    for (const auto& [key, count] : counts) {
        flows.push_back({key.first, aligned.categories[key.second], count});
    }
    return flows;
}

double quasi_hierarchy_fraction(const Partition& fine, const Partition& coarse, double mass) {
    const auto flows = sankey_flows(fine, coarse);
    std::vector<int> cluster_size(fine.n_communities, 0);
    std::vector<int> cluster_max(fine.n_communities, 0);
    for (const auto& flow : flows) {
        cluster_size[flow.fine] += flow.count;
        cluster_max[flow.fine] = std::max(cluster_max[flow.fine], flow.count);
    }
    int nested = 0;
    for (int c = 0; c < fine.n_communities; ++c) {
        if (cluster_max[c] >= mass * cluster_size[c]) ++nested;
    }
    return static_cast<double>(nested) / fine.n_communities;
}

}  // namespace mstopics
