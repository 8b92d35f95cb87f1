#pragma once

#include "mstopics/embeddings_io.hpp"
#include "mstopics/partition.hpp"

#include <Eigen/Core>

#include <string>
#include <vector>

namespace mstopics {

// Category/cluster cross table with standardized Pearson residuals as the
// z-score: (n_ij - E_ij) / sqrt(E_ij (1 - r_i/n)(1 - c_j/n)), E_ij = r_i c_j / n.
struct ContingencyTable {
    std::vector<std::string> row_names;  // label categories, sorted
    std::vector<int> col_clusters;       // community indices
    Eigen::MatrixXi counts;
    Eigen::MatrixXd z_scores;
    int coverage = 0;  // documents present in both groupings
};

// VI(t,t') between the optimized partitions across a Markov time grid.
struct CrossTimeVI {
    std::vector<double> t_grid;
    Eigen::MatrixXd matrix;
};

// The label/partition overlap flattened to two parallel index vectors.
struct AlignedLabels {
    std::vector<std::string> categories;  // sorted distinct categories in the overlap
    std::vector<int> doc_rows;            // embedding row of each co-labeled document
    std::vector<int> label_of;            // index into categories, per kept document
    std::vector<int> community_of;        // partition community, per kept document
    int coverage = 0;
};

AlignedLabels align_labels(const LabelSet& labels, const Partition& partition,
                           const std::vector<std::string>& ids);

double partition_entropy(const Partition& p);

// Meila's metric in nats. The normalized variant divides by ln N.
double variation_of_information(const Partition& a, const Partition& b, bool normalized = false);

// Mean VI over all unordered pairs.
double ensemble_vi(const std::vector<Partition>& partitions);

CrossTimeVI cross_time_vi(const std::vector<Partition>& best_per_time,
                          const std::vector<double>& t_grid);

// U(T|C) = I(T;C) / H(T), in [0,1]. Requires >= 2 categories in the overlap.
double uncertainty_coefficient(const AlignedLabels& aligned);
double uncertainty_coefficient(const LabelSet& labels, const Partition& partition,
                               const std::vector<std::string>& ids);

ContingencyTable contingency_with_zscores(const AlignedLabels& aligned);
ContingencyTable contingency_with_zscores(const LabelSet& labels, const Partition& partition,
                                          const std::vector<std::string>& ids);

// Per category: mean vector, rank labeled documents by cosine similarity to
// it, take the top n_nearest, count label matches. Sum over categories.
int centroid_benchmark(const EmbeddingMatrix& embeddings, const LabelSet& labels, int n_nearest);

}  // namespace mstopics
