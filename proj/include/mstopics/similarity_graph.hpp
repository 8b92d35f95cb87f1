#pragma once

#include "mstopics/embeddings_io.hpp"

#include <Eigen/Core>

#include <vector>

namespace mstopics {

enum class MatrixKind {
    cosine_similarity,
    distance,
    normalized_distance,
    normalized_similarity,
};

// Symmetric N x N matrix of pairwise values over documents.
struct PairwiseMatrix {
    MatrixKind kind;
    Eigen::MatrixXd values;

    int n() const { return static_cast<int>(values.rows()); }
};

struct Edge {
    int u = 0;  // u < v always
    int v = 0;
    double weight = 0.0;

    bool operator==(const Edge&) const = default;
};

// Weighted undirected graph, node ids aligned with embedding row order.
struct SparseGraph {
    int n = 0;
    std::vector<Edge> edges;

    Eigen::MatrixXd adjacency() const;
    Eigen::VectorXd strengths() const;  // weighted degree per node
    double total_weight() const;        // sum of edge weights (each edge once)
};

// Zero-weight edges would break the random-walk diffusion, so the pair at
// maximum distance keeps a tiny positive weight instead of exactly 0.
inline constexpr double kMinEdgeWeight = 1e-12;

// S_cos[i][j] = <e_i,e_j> / (|e_i||e_j|), clamped to [-1,1], unit diagonal.
PairwiseMatrix cosine_similarity_matrix(const EmbeddingMatrix& embeddings);

struct NormalizedMatrices {
    PairwiseMatrix distance;    // D_hat = (1 - S_cos) / max entry
    PairwiseMatrix similarity;  // S_hat = 1 - D_hat
};

NormalizedMatrices normalize_distance(const PairwiseMatrix& cosine);

// Kruskal over the complete graph on D_hat. Deterministic under ties via the
// total edge order (weight, u, v). Edge weights carry the D_hat entry.
std::vector<Edge> minimum_spanning_tree(const PairwiseMatrix& distance);

// Per node, its k smallest-distance neighbors (ties to the lower index),
// deduplicated as undirected edges. Edge weights carry the D_hat entry.
std::vector<Edge> knn_edges(const PairwiseMatrix& distance, int k);

// MST union kNN, reweighted by normalized similarity. k=0 means MST only.
SparseGraph build_mst_knn(const EmbeddingMatrix& embeddings, int k);
SparseGraph graph_from_distance(const NormalizedMatrices& matrices, int k);

bool is_connected(const SparseGraph& graph);

}  // namespace mstopics
