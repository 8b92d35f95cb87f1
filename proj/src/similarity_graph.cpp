#include "mstopics/similarity_graph.hpp"

#include "mstopics/errors.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace mstopics {

namespace {

struct UnionFind {
    std::vector<int> parent;
    std::vector<int> rank;

    explicit UnionFind(int n) : parent(n), rank(n, 0) {
        std::iota(parent.begin(), parent.end(), 0);
    }

    int find(int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }

    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (rank[a] < rank[b]) std::swap(a, b);
        parent[b] = a;
        if (rank[a] == rank[b]) ++rank[a];
        return true;
    }
};

}  // namespace

Eigen::MatrixXd SparseGraph::adjacency() const {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (const auto& e : edges) {
        a(e.u, e.v) = e.weight;
        a(e.v, e.u) = e.weight;
    }
    return a;
}

Eigen::VectorXd SparseGraph::strengths() const {
    Eigen::VectorXd s = Eigen::VectorXd::Zero(n);
    for (const auto& e : edges) {
        s(e.u) += e.weight;
        s(e.v) += e.weight;
    }
    return s;
}

double SparseGraph::total_weight() const {
    double w = 0.0;
    for (const auto& e : edges) w += e.weight;
    return w;
}

PairwiseMatrix cosine_similarity_matrix(const EmbeddingMatrix& embeddings) {
    const int n = embeddings.n();
    Eigen::MatrixXd rows = embeddings.vectors;
    for (int i = 0; i < n; ++i) {
        const double norm = rows.row(i).norm();
        if (norm == 0.0) throw ValidationError("zero-norm row " + std::to_string(i));
        rows.row(i) /= norm;
    }

    PairwiseMatrix out;
    out.kind = MatrixKind::cosine_similarity;
    // rankUpdate fills one triangle only, which keeps the mirror copy exact.
    out.values = Eigen::MatrixXd::Zero(n, n);
    out.values.selfadjointView<Eigen::Lower>().rankUpdate(rows);
    out.values.triangularView<Eigen::StrictlyUpper>() =
        out.values.triangularView<Eigen::StrictlyLower>().transpose();

    out.values = out.values.cwiseMax(-1.0).cwiseMin(1.0);
    out.values.diagonal().setOnes();
    return out;
}

NormalizedMatrices normalize_distance(const PairwiseMatrix& cosine) {
    const int n = cosine.n();
    Eigen::MatrixXd dist = Eigen::MatrixXd::Ones(n, n) - cosine.values;
    dist.diagonal().setZero();

    const double max_dist = dist.maxCoeff();
    if (max_dist <= 0.0) throw ValidationError("degenerate distance matrix: all documents identical");
    dist /= max_dist;
    dist = dist.cwiseMax(0.0).cwiseMin(1.0);
    dist.diagonal().setZero();

    NormalizedMatrices out;
    out.distance = {MatrixKind::normalized_distance, dist};
    out.similarity = {MatrixKind::normalized_similarity, Eigen::MatrixXd::Ones(n, n) - dist};
    out.similarity.values.diagonal().setOnes();
    return out;
}

std::vector<Edge> minimum_spanning_tree(const PairwiseMatrix& distance) {
    const int n = distance.n();
    if (n < 2) throw ValidationError("minimum_spanning_tree needs at least 2 nodes");

    std::vector<Edge> all;
    all.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) all.push_back({u, v, distance.values(u, v)});

    std::sort(all.begin(), all.end(), [](const Edge& a, const Edge& b) {
        if (a.weight != b.weight) return a.weight < b.weight;
        if (a.u != b.u) return a.u < b.u;
        return a.v < b.v;
    });

    UnionFind uf(n);
    std::vector<Edge> tree;
    tree.reserve(n - 1);
    for (const auto& e : all) {
        if (uf.unite(e.u, e.v)) {
            tree.push_back(e);
            if (static_cast<int>(tree.size()) == n - 1) break;
        }
    }
    return tree;
}

std::vector<Edge> knn_edges(const PairwiseMatrix& distance, int k) {
    const int n = distance.n();
    if (k < 1 || k > n - 1) {
        throw ValidationError("k must be in [1, N-1], got " + std::to_string(k));
    }

    std::set<std::pair<int, int>> picked;
    for (int i = 0; i < n; ++i) {
        std::vector<int> order;
        order.reserve(n - 1);
        for (int j = 0; j < n; ++j)
            if (j != i) order.push_back(j);
        const auto closer = [&](int a, int b) {
            const double da = distance.values(i, a);
            const double db = distance.values(i, b);
            if (da != db) return da < db;
            return a < b;
        };
        std::nth_element(order.begin(), order.begin() + (k - 1), order.end(), closer);
        std::sort(order.begin(), order.begin() + k, closer);
        for (int m = 0; m < k; ++m) {
            const int j = order[m];
            picked.emplace(std::min(i, j), std::max(i, j));
        }
    }

    std::vector<Edge> edges;
    edges.reserve(picked.size());
    for (const auto& [u, v] : picked) edges.push_back({u, v, distance.values(u, v)});
    return edges;
}

SparseGraph graph_from_distance(const NormalizedMatrices& matrices, int k) {
    const auto& dist = matrices.distance;
    const auto& sim = matrices.similarity;
    const int n = dist.n();

    std::set<std::pair<int, int>> pairs;
    for (const auto& e : minimum_spanning_tree(dist)) pairs.emplace(e.u, e.v);
    if (k > 0) {
        for (const auto& e : knn_edges(dist, k)) pairs.emplace(e.u, e.v);
    }

    SparseGraph graph;
    graph.n = n;
    graph.edges.reserve(pairs.size());
    for (const auto& [u, v] : pairs) {
        graph.edges.push_back({u, v, std::max(sim.values(u, v), kMinEdgeWeight)});
    }
    return graph;
}

SparseGraph build_mst_knn(const EmbeddingMatrix& embeddings, int k) {
    return graph_from_distance(normalize_distance(cosine_similarity_matrix(embeddings)), k);
}

bool is_connected(const SparseGraph& graph) {
    if (graph.n == 0) return false;
    UnionFind uf(graph.n);
    int components = graph.n;
    for (const auto& e : graph.edges) {
        if (uf.unite(e.u, e.v)) --components;
    }
    return components == 1;
}

}  // namespace mstopics
