#include "mstopics/synthetic.hpp"

#include "mstopics/errors.hpp"
#include "mstopics/rng.hpp"

#include <numeric>
#include <sstream>
#include <vector>

namespace mstopics {

namespace {

struct UnionFind {
    std::vector<int> parent;

    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }

    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }

    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[b] = a;
        return true;
    }
};

std::string doc_id(int i) {
    std::ostringstream id;
    id << "doc" << i;
    return id.str();
}

}  // namespace

TwoLevelBenchmark two_level_benchmark(const TwoLevelParams& params, std::uint64_t seed) {
    if (params.n_blocks < 2 || params.block_size < 2 || params.n_super < 1 ||
        params.n_blocks % params.n_super != 0) {
        throw ValidationError("two_level_benchmark: blocks must divide evenly into super-blocks");
    }
    for (double p : {params.p_in, params.p_mid, params.p_out}) {
        if (p < 0.0 || p > 1.0) throw ValidationError("two_level_benchmark: probability out of range");
    }

    const int n = params.n_blocks * params.block_size;
    const int blocks_per_super = params.n_blocks / params.n_super;

    TwoLevelBenchmark bench;
    bench.graph.n = n;
    std::vector<int> fine(n), coarse(n);
    for (int i = 0; i < n; ++i) {
        fine[i] = i / params.block_size;
        coarse[i] = fine[i] / blocks_per_super;
    }
    bench.fine = Partition::from_labels(fine);
    bench.coarse = Partition::from_labels(coarse);

    SplitMix64 rng(seed);
    UnionFind uf(n);
    for (int u = 0; u < n; ++u) {
        for (int v = u + 1; v < n; ++v) {
            double p = params.p_out;
            if (fine[u] == fine[v]) {
                p = params.p_in;
            } else if (coarse[u] == coarse[v]) {
                p = params.p_mid;
            }
            if (rng.uniform() < p) {
                bench.graph.edges.push_back({u, v, 1.0});
                uf.unite(u, v);
            }
        }
    }

    // Sparse draws can leave stragglers; chain each one to its predecessor,
    // which by induction is already connected to node 0.
    for (int u = 1; u < n; ++u) {
        if (uf.find(u) != uf.find(0)) {
            bench.graph.edges.push_back({u - 1, u, 1.0});
            uf.unite(u - 1, u);
        }
    }
    return bench;
}

SyntheticCorpus hierarchical_corpus(int n_docs, int dim, int n_coarse, int fine_per_coarse,
                                    std::uint64_t seed) {
    const int n_fine = n_coarse * fine_per_coarse;
    if (n_docs < n_fine || dim < 2 || n_coarse < 2 || fine_per_coarse < 1) {
        throw ValidationError("hierarchical_corpus: need at least one document per fine blob");
    }
    if (n_coarse > 26 || n_fine > 26 * 26) {
        throw ValidationError("hierarchical_corpus: vocabulary supports at most 26 areas");
    }

    SplitMix64 rng(seed);
    std::vector<Eigen::VectorXd> coarse_centers(n_coarse);
    for (auto& center : coarse_centers) {
        center.resize(dim);
        for (int j = 0; j < dim; ++j) center(j) = rng.gaussian();
        center.normalize();
        center *= 4.0;
    }
    std::vector<Eigen::VectorXd> fine_offsets(n_fine);
    for (auto& offset : fine_offsets) {
        offset.resize(dim);
        for (int j = 0; j < dim; ++j) offset(j) = rng.gaussian();
        offset.normalize();
        offset *= 1.5;
    }

    SyntheticCorpus corpus;
    corpus.coarse_labels.name = "level1";
    corpus.fine_labels.name = "level2";
    corpus.embeddings.vectors.resize(n_docs, dim);

    for (int i = 0; i < n_docs; ++i) {
        const int f = i % n_fine;
        const int c = f / fine_per_coarse;
        const std::string id = doc_id(i);
        corpus.embeddings.ids.push_back(id);
        corpus.coarse_labels.assignments[id] = "area" + std::to_string(c);
        corpus.fine_labels.assignments[id] = "topic" + std::to_string(f);

        Eigen::VectorXd vec = coarse_centers[c] + fine_offsets[f];
        for (int j = 0; j < dim; ++j) vec(j) += 0.35 * rng.gaussian();
        if (vec.norm() == 0.0) vec(0) = 1.0;
        corpus.embeddings.vectors.row(i) = vec;

        // Text mirrors the hierarchy: one area word, three topic words, filler
        // and a numeric token the tokenizer must drop. Vocabulary is letter
        // only because tokens containing digits get discarded.
        std::ostringstream text;
        text << "The area" << static_cast<char>('a' + c) << "word report mentions";
        for (int w = 0; w < 3; ++w) {
            text << " topic" << static_cast<char>('a' + f % 26) << static_cast<char>('a' + f / 26)
                 << "term" << static_cast<char>('a' + rng.bounded(4));
        }
        text << " on ward " << 100 + static_cast<int>(rng.bounded(900)) << ".";
        corpus.documents[id] = text.str();
    }
    return corpus;
}

EmbeddingMatrix random_embeddings(int n, int dim, std::uint64_t seed) {
    if (n < 2 || dim < 1) throw ValidationError("random_embeddings: need n >= 2, dim >= 1");
    SplitMix64 rng(seed);
    EmbeddingMatrix m;
    m.vectors.resize(n, dim);
    for (int i = 0; i < n; ++i) {
        m.ids.push_back(doc_id(i));
        for (int j = 0; j < dim; ++j) m.vectors(i, j) = rng.gaussian();
        if (m.vectors.row(i).norm() == 0.0) m.vectors(i, 0) = 1.0;
    }
    return m;
}

}  // namespace mstopics
