#pragma once

#include "mstopics/embeddings_io.hpp"
#include "mstopics/partition.hpp"

#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

namespace mstopics {

struct TermWeight {
    std::string lemma;
    double weight = 0.0;

    bool operator==(const TermWeight&) const = default;
};

struct ClusterSummary {
    int cluster = 0;
    int size = 0;          // documents in the cluster
    bool no_tokens = false;  // cluster text was empty after normalization
    std::vector<TermWeight> terms;  // weight descending, lemma ascending on ties
};

using LemmaTable = std::unordered_map<std::string, std::string>;

// `token<TAB>lemma` rows; comments and blank lines skipped.
LemmaTable load_lemma_table(const std::filesystem::path& path);

// Table lookup with identity fallback for unknown tokens.
std::string lemmatise(const std::string& token, const LemmaTable& table);

// Word-cloud weights per cluster: lemma frequency in the cluster's pooled
// text, scaled by ln(1 + K/k) where k counts the clusters containing the
// lemma. The smoothing keeps ubiquitous terms small but nonzero.
std::vector<ClusterSummary> cluster_terms(const TokenizedCorpus& corpus,
                                          const Partition& partition,
                                          const std::vector<std::string>& ids, int top_n,
                                          const LemmaTable& lemmas = {});

}  // namespace mstopics
