#pragma once

#include "mstopics/embeddings_io.hpp"
#include "mstopics/partition.hpp"
#include "mstopics/similarity_graph.hpp"

#include <cstdint>
#include <map>
#include <string>

namespace mstopics {

// Planted two-level stochastic block model: blocks nested in super-blocks.
struct TwoLevelBenchmark {
    SparseGraph graph;
    Partition fine;    // one community per block
    Partition coarse;  // one community per super-block
};

struct TwoLevelParams {
    int n_blocks = 16;
    int block_size = 8;
    int n_super = 4;
    double p_in = 0.9;   // within a block
    double p_mid = 0.2;  // across blocks, within a super-block
    double p_out = 0.01; // across super-blocks
};

TwoLevelBenchmark two_level_benchmark(const TwoLevelParams& params, std::uint64_t seed);

// Embedding set with nested blob structure, matching two-level labels, and
// synthetic document text whose vocabulary follows the blob hierarchy.
struct SyntheticCorpus {
    EmbeddingMatrix embeddings;
    LabelSet coarse_labels;  // named "level1"
    LabelSet fine_labels;    // named "level2"
    std::map<std::string, std::string> documents;
};

SyntheticCorpus hierarchical_corpus(int n_docs, int dim, int n_coarse, int fine_per_coarse,
                                    std::uint64_t seed);

EmbeddingMatrix random_embeddings(int n, int dim, std::uint64_t seed);

}  // namespace mstopics
