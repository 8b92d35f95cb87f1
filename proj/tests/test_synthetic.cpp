#include <doctest.h>

#include "mstopics/embeddings_io.hpp"
#include "mstopics/errors.hpp"
#include "mstopics/markov_stability.hpp"
#include "mstopics/partition_metrics.hpp"
#include "mstopics/scale_selection.hpp"
#include "mstopics/similarity_graph.hpp"
#include "mstopics/synthetic.hpp"

#include <algorithm>
#include <set>

using namespace mstopics;

TEST_CASE("two-level benchmark has the planted block structure") {
    TwoLevelParams params;
    const auto bench = two_level_benchmark(params, 7);

    CHECK(bench.graph.n == 128);
    CHECK(bench.fine.size() == 128);
    CHECK(bench.fine.n_communities == 16);
    CHECK(bench.coarse.n_communities == 4);
    for (int i = 0; i < 128; ++i) {
        CHECK(bench.fine.membership[i] == i / 8);
        CHECK(bench.coarse.membership[i] == i / 32);
    }
    CHECK(quasi_hierarchy_fraction(bench.fine, bench.coarse) == doctest::Approx(1.0));
}

TEST_CASE("two-level benchmark is connected and respects edge probabilities") {
    TwoLevelParams params;
    for (std::uint64_t seed : {1ull, 2ull, 3ull, 42ull, 99ull}) {
        const auto bench = two_level_benchmark(params, seed);
        CHECK(is_connected(bench.graph));
        for (const auto& e : bench.graph.edges) {
            CHECK(e.u < e.v);
            CHECK(e.weight == 1.0);
        }

        int in = 0, mid = 0, out = 0;
        for (const auto& e : bench.graph.edges) {
            if (bench.fine.membership[e.u] == bench.fine.membership[e.v]) {
                ++in;
            } else if (bench.coarse.membership[e.u] == bench.coarse.membership[e.v]) {
                ++mid;
            } else {
                ++out;
            }
        }
        // Pair counts: 16*C(8,2)=448 in-block, 4*(C(32,2)-4*C(8,2))=1792 mid,
        // C(128,2)-448-1792=5888 across. Bounds are loose but catch swapped
        // probabilities or a broken sampler.
        CHECK(in > 448 * 0.75);
        CHECK(mid > 1792 * 0.12);
        CHECK(mid < 1792 * 0.30);
        CHECK(out < 5888 * 0.04);
    }
}

TEST_CASE("two-level benchmark is reproducible per seed") {
    TwoLevelParams params;
    const auto a = two_level_benchmark(params, 11);
    const auto b = two_level_benchmark(params, 11);
    CHECK(a.graph.edges == b.graph.edges);

    const auto c = two_level_benchmark(params, 12);
    CHECK(a.graph.edges != c.graph.edges);
}

TEST_CASE("two-level benchmark rejects bad parameters") {
    TwoLevelParams params;
    params.n_super = 5;
    CHECK_THROWS_AS(two_level_benchmark(params, 1), ValidationError);
    params = TwoLevelParams{};
    params.p_in = 1.5;
    CHECK_THROWS_AS(two_level_benchmark(params, 1), ValidationError);
}

TEST_CASE("scan of a small two-level graph recovers both planted scales") {
    TwoLevelParams params;
    params.n_blocks = 8;
    params.block_size = 6;
    params.n_super = 2;
    const auto bench = two_level_benchmark(params, 5);

    ScanOptions opts;
    opts.n_runs = 30;
    opts.n_top = 10;
    opts.master_seed = 17;
    const auto grid = log_time_grid(0.05, 50.0, 30);
    const auto scan = scan_markov_times(bench.graph, grid, opts);

    const auto scales = find_robust_scales(scan, scan.cross_vi, {});
    REQUIRE(scales.size() >= 2);

    bool saw_fine = false, saw_coarse = false;
    for (const auto& s : scales) {
        if (variation_of_information(s.partition, bench.fine) < 1e-12) saw_fine = true;
        if (variation_of_information(s.partition, bench.coarse) < 1e-12) saw_coarse = true;
    }
    CHECK(saw_fine);
    CHECK(saw_coarse);
}

TEST_CASE("hierarchical corpus shape, labels and nesting") {
    const auto corpus = hierarchical_corpus(120, 24, 4, 3, 9);

    CHECK(corpus.embeddings.n() == 120);
    CHECK(corpus.embeddings.dim() == 24);
    CHECK(corpus.coarse_labels.name == "level1");
    CHECK(corpus.fine_labels.name == "level2");
    CHECK(corpus.coarse_labels.categories().size() == 4);
    CHECK(corpus.fine_labels.categories().size() == 12);
    CHECK(corpus.documents.size() == 120);

    // A fine topic never straddles two areas.
    std::map<std::string, std::string> area_of_topic;
    for (int i = 0; i < corpus.embeddings.n(); ++i) {
        const auto& id = corpus.embeddings.ids[i];
        const auto& topic = corpus.fine_labels.assignments.at(id);
        const auto& area = corpus.coarse_labels.assignments.at(id);
        auto [it, inserted] = area_of_topic.emplace(topic, area);
        if (!inserted) CHECK(it->second == area);
        CHECK(corpus.embeddings.vectors.row(i).norm() > 0.0);
    }

    // Within-topic cosine should beat across-area cosine on average.
    const auto cos = cosine_similarity_matrix(corpus.embeddings);
    double same = 0.0, cross = 0.0;
    int n_same = 0, n_cross = 0;
    for (int i = 0; i < 120; ++i) {
        for (int j = i + 1; j < 120; ++j) {
            const auto &a = corpus.embeddings.ids[i], &b = corpus.embeddings.ids[j];
            if (corpus.fine_labels.assignments.at(a) == corpus.fine_labels.assignments.at(b)) {
                same += cos.values(i, j);
                ++n_same;
            } else if (corpus.coarse_labels.assignments.at(a) != corpus.coarse_labels.assignments.at(b)) {
                cross += cos.values(i, j);
                ++n_cross;
            }
        }
    }
    CHECK(same / n_same > cross / n_cross + 0.3);
}

TEST_CASE("hierarchical corpus text carries the topic vocabulary") {
    const auto corpus = hierarchical_corpus(24, 8, 2, 2, 3);
    const auto tokens = tokenize_corpus(corpus.documents, {"the", "on"});
    CHECK(tokens.tokens.size() == 24);
    for (const auto& [id, toks] : tokens.tokens) {
        const int area = std::stoi(corpus.coarse_labels.assignments.at(id).substr(4));
        const std::string area_word = std::string("area") + static_cast<char>('a' + area) + "word";
        CHECK(std::count(toks.begin(), toks.end(), area_word) == 1);
        // The ward number token contains digits and must have been dropped.
        for (const auto& t : toks) {
            CHECK(t.find_first_of("0123456789") == std::string::npos);
        }
    }
}

TEST_CASE("hierarchical corpus is reproducible and validates inputs") {
    const auto a = hierarchical_corpus(30, 6, 2, 3, 21);
    const auto b = hierarchical_corpus(30, 6, 2, 3, 21);
    CHECK(a.embeddings.vectors == b.embeddings.vectors);
    CHECK(a.documents == b.documents);

    CHECK_THROWS_AS(hierarchical_corpus(5, 6, 2, 3, 1), ValidationError);
    CHECK_THROWS_AS(hierarchical_corpus(30, 1, 2, 3, 1), ValidationError);
}

TEST_CASE("random embeddings are well formed") {
    const auto m = random_embeddings(40, 5, 13);
    CHECK(m.n() == 40);
    CHECK(m.dim() == 5);
    std::set<std::string> ids(m.ids.begin(), m.ids.end());
    CHECK(ids.size() == 40);

    const auto again = random_embeddings(40, 5, 13);
    CHECK(m.vectors == again.vectors);
    const auto other = random_embeddings(40, 5, 14);
    CHECK(m.vectors != other.vectors);

    CHECK_THROWS_AS(random_embeddings(1, 5, 0), ValidationError);
}
