#include <doctest.h>

#include "mstopics/errors.hpp"
#include "mstopics/rng.hpp"
#include "mstopics/similarity_graph.hpp"

#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

using namespace mstopics;

namespace {

EmbeddingMatrix make_embeddings(const Eigen::MatrixXd& rows) {
    EmbeddingMatrix m;
    m.vectors = rows;
    for (int i = 0; i < rows.rows(); ++i) m.ids.push_back("doc" + std::to_string(i));
    return m;
}

EmbeddingMatrix random_unit_embeddings(int n, int d, std::uint64_t seed) {
    SplitMix64 rng(seed);
    Eigen::MatrixXd rows(n, d);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < d; ++j) rows(i, j) = rng.gaussian();
        rows.row(i).normalize();
    }
    return make_embeddings(rows);
}

std::set<std::pair<int, int>> edge_pairs(const std::vector<Edge>& edges) {
    std::set<std::pair<int, int>> out;
    for (const auto& e : edges) out.emplace(e.u, e.v);
    return out;
}

}  // namespace

TEST_CASE("cosine similarity closed forms") {
    Eigen::MatrixXd rows(4, 2);
    rows << 1, 0,
            0, 1,
            1, 1,
            2, 0;
    const auto s = cosine_similarity_matrix(make_embeddings(rows));

    CHECK(s.values(0, 1) == 0.0);
    CHECK(s.values(0, 3) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(s.values(0, 2) == doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-12));
    for (int i = 0; i < 4; ++i) CHECK(s.values(i, i) == 1.0);
}

TEST_CASE("cosine matrix is exactly symmetric and clamped") {
    const auto emb = random_unit_embeddings(60, 5, 11);
    const auto s = cosine_similarity_matrix(emb);
    CHECK((s.values - s.values.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(s.values.maxCoeff() <= 1.0);
    CHECK(s.values.minCoeff() >= -1.0);
}

TEST_CASE("normalize_distance matches hand-worked examples") {
    SUBCASE("two nodes") {
        PairwiseMatrix s{MatrixKind::cosine_similarity, Eigen::MatrixXd(2, 2)};
        s.values << 1.0, 0.5, 0.5, 1.0;
        const auto nm = normalize_distance(s);
        CHECK(nm.distance.values(0, 1) == 1.0);
        CHECK(nm.distance.values(0, 0) == 0.0);
        CHECK(nm.similarity.values(0, 1) == 0.0);
        CHECK(nm.similarity.values(0, 0) == 1.0);
    }
    SUBCASE("three nodes, division by the max off-diagonal") {
        PairwiseMatrix s{MatrixKind::cosine_similarity, Eigen::MatrixXd(3, 3)};
        s.values << 1.0, 0.8, 0.6,
                    0.8, 1.0, 0.6,
                    0.6, 0.6, 1.0;
        const auto nm = normalize_distance(s);
        CHECK(nm.distance.values(0, 1) == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(nm.distance.values(0, 2) == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(nm.distance.values(1, 2) == doctest::Approx(1.0).epsilon(1e-15));
    }
    SUBCASE("identical documents are degenerate") {
        PairwiseMatrix s{MatrixKind::cosine_similarity, Eigen::MatrixXd::Ones(3, 3)};
        CHECK_THROWS_WITH_AS(normalize_distance(s), doctest::Contains("degenerate"),
                             ValidationError);
    }
}

TEST_CASE("normalized matrices stay in [0,1] with max distance exactly 1") {
    const auto emb = random_unit_embeddings(40, 4, 7);
    const auto nm = normalize_distance(cosine_similarity_matrix(emb));
    CHECK(nm.distance.values.minCoeff() >= 0.0);
    CHECK(nm.distance.values.maxCoeff() == 1.0);
    CHECK(nm.similarity.values.minCoeff() >= 0.0);
    CHECK(nm.similarity.values.maxCoeff() <= 1.0);
    CHECK((nm.distance.values - nm.distance.values.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("minimum spanning tree picks the forced edges") {
    PairwiseMatrix d{MatrixKind::normalized_distance, Eigen::MatrixXd::Zero(3, 3)};
    d.values << 0.0, 0.1, 0.2,
                0.1, 0.0, 0.3,
                0.2, 0.3, 0.0;
    const auto tree = minimum_spanning_tree(d);
    CHECK(edge_pairs(tree) == std::set<std::pair<int, int>>{{0, 1}, {0, 2}});
}

TEST_CASE("two-node tree is the single edge") {
    PairwiseMatrix d{MatrixKind::normalized_distance, Eigen::MatrixXd::Zero(2, 2)};
    d.values(0, 1) = d.values(1, 0) = 0.4;
    const auto tree = minimum_spanning_tree(d);
    REQUIRE(tree.size() == 1);
    CHECK(tree[0].u == 0);
    CHECK(tree[0].v == 1);
}

TEST_CASE("tree weight matches exhaustive enumeration on small instances") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const auto emb = random_unit_embeddings(6, 3, 100 + seed);
        const auto nm = normalize_distance(cosine_similarity_matrix(emb));
        const auto tree = minimum_spanning_tree(nm.distance);
        double total = 0.0;
        for (const auto& e : tree) total += e.weight;
        const double best = oracle::brute_force_mst_weight(nm.distance.values);
        CHECK(total == doctest::Approx(best).epsilon(1e-12));
    }
}

TEST_CASE("tree on larger input stays optimal on subsampled instances") {
    const auto emb = random_unit_embeddings(50, 4, 99);
    const auto nm = normalize_distance(cosine_similarity_matrix(emb));
    SplitMix64 rng(5);
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<int> nodes(50);
        std::iota(nodes.begin(), nodes.end(), 0);
        shuffle(nodes, rng);
        nodes.resize(6);
        Eigen::MatrixXd sub(6, 6);
        for (int a = 0; a < 6; ++a)
            for (int b = 0; b < 6; ++b) sub(a, b) = nm.distance.values(nodes[a], nodes[b]);
        const auto tree = minimum_spanning_tree({MatrixKind::normalized_distance, sub});
        double total = 0.0;
        for (const auto& e : tree) total += e.weight;
        CHECK(total == doctest::Approx(oracle::brute_force_mst_weight(sub)).epsilon(1e-12));
    }
}

TEST_CASE("knn edges for the collinear triple") {
    // B sits between A and C, so 1-NN links are A-B and B-C.
    Eigen::MatrixXd rows(3, 2);
    rows << 1.0, 0.0,
            1.0, 0.3,
            1.0, 0.6;
    const auto nm = normalize_distance(cosine_similarity_matrix(make_embeddings(rows)));
    const auto edges = knn_edges(nm.distance, 1);
    CHECK(edge_pairs(edges) == std::set<std::pair<int, int>>{{0, 1}, {1, 2}});
}

TEST_CASE("knn matches the brute-force neighbor oracle") {
    const auto emb = random_unit_embeddings(30, 4, 21);
    const auto nm = normalize_distance(cosine_similarity_matrix(emb));
    const int k = 4;
    const auto edges = edge_pairs(knn_edges(nm.distance, k));
    for (int i = 0; i < 30; ++i) {
        for (int j : oracle::brute_force_knn(nm.distance.values, i, k)) {
            CHECK(edges.count({std::min(i, j), std::max(i, j)}) == 1);
        }
    }
}

TEST_CASE("knn with k = N-1 saturates to the complete graph") {
    const auto emb = random_unit_embeddings(12, 3, 31);
    const auto nm = normalize_distance(cosine_similarity_matrix(emb));
    CHECK(knn_edges(nm.distance, 11).size() == 12 * 11 / 2);
}

TEST_CASE("knn rejects out-of-range k") {
    const auto emb = random_unit_embeddings(5, 3, 41);
    const auto nm = normalize_distance(cosine_similarity_matrix(emb));
    CHECK_THROWS_AS(knn_edges(nm.distance, 0), ValidationError);
    CHECK_THROWS_AS(knn_edges(nm.distance, 5), ValidationError);
}

TEST_CASE("graph union is connected for every k, including MST-only") {
    const auto emb = random_unit_embeddings(40, 5, 51);
    for (int k : {0, 1, 3, 13, 39}) {
        const auto graph = build_mst_knn(emb, k);
        CHECK(is_connected(graph));
        CHECK(graph.n == 40);
        for (const auto& e : graph.edges) {
            CHECK(e.u < e.v);
            CHECK(e.weight > 0.0);
            CHECK(e.weight <= 1.0);
        }
    }
}

TEST_CASE("k=0 gives exactly the tree edge count") {
    const auto emb = random_unit_embeddings(25, 4, 61);
    CHECK(build_mst_knn(emb, 0).edges.size() == 24);
}

TEST_CASE("edge sets grow monotonically with k") {
    const auto emb = random_unit_embeddings(35, 4, 71);
    const auto nm = normalize_distance(cosine_similarity_matrix(emb));
    std::set<std::pair<int, int>> previous;
    for (int k = 0; k <= 10; ++k) {
        const auto graph = graph_from_distance(nm, k);
        std::set<std::pair<int, int>> current;
        for (const auto& e : graph.edges) current.emplace(e.u, e.v);
        CHECK(std::includes(current.begin(), current.end(), previous.begin(), previous.end()));
        previous = std::move(current);
    }
}

TEST_CASE("two separated blobs keep mostly intra-blob edges plus a bridge") {
    SplitMix64 rng(81);
    const int per_blob = 20;
    Eigen::MatrixXd rows(2 * per_blob, 3);
    for (int i = 0; i < per_blob; ++i) {
        rows.row(i) << 1.0 + 0.05 * rng.gaussian(), 0.05 * rng.gaussian(), 0.05 * rng.gaussian();
        rows.row(per_blob + i) << 0.05 * rng.gaussian(), 1.0 + 0.05 * rng.gaussian(),
            0.05 * rng.gaussian();
    }
    const auto graph = build_mst_knn(make_embeddings(rows), 3);
    int inter = 0;
    for (const auto& e : graph.edges) {
        if ((e.u < per_blob) != (e.v < per_blob)) ++inter;
    }
    CHECK(is_connected(graph));
    CHECK(inter >= 1);
    CHECK(inter < static_cast<int>(graph.edges.size()) / 10);
}

TEST_CASE("adjacency, strengths and total weight agree") {
    const auto emb = random_unit_embeddings(15, 3, 91);
    const auto graph = build_mst_knn(emb, 2);
    const Eigen::MatrixXd a = graph.adjacency();
    CHECK((a - a.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(a.diagonal().cwiseAbs().maxCoeff() == 0.0);
    const Eigen::VectorXd s = graph.strengths();
    CHECK((a.rowwise().sum() - s).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(graph.total_weight() == doctest::Approx(a.sum() / 2.0).epsilon(1e-14));
}
