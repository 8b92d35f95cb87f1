#include "mstopics/topic_summary.hpp"

#include "mstopics/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

namespace mstopics {

LemmaTable load_lemma_table(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open lemma table: " + path.string());

    LemmaTable table;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const std::size_t tab = line.find('\t');
        if (tab == std::string::npos) {
            throw ValidationError("lemma table expects 'token<TAB>lemma' at line " +
                                  std::to_string(line_no));
        }
        const std::string token = line.substr(0, tab);
        const std::string lemma = line.substr(tab + 1);
        const auto [it, inserted] = table.emplace(token, lemma);
        if (!inserted && it->second != lemma) {
            throw ValidationError("conflicting lemma for '" + token + "' at line " +
                                  std::to_string(line_no));
        }
    }
    return table;
}

std::string lemmatise(const std::string& token, const LemmaTable& table) {
    const auto it = table.find(token);
    return it == table.end() ? token : it->second;
}

std::vector<ClusterSummary> cluster_terms(const TokenizedCorpus& corpus,
                                          const Partition& partition,
                                          const std::vector<std::string>& ids, int top_n,
                                          const LemmaTable& lemmas) {
    if (static_cast<int>(ids.size()) != partition.size()) {
        throw ValidationError("cluster_terms: id list and partition disagree on N");
    }
    if (top_n < 1) throw ValidationError("cluster_terms: top_n must be positive");

    const int n_clusters = partition.n_communities;
    // Ordered maps keep the aggregation order independent of hashing details.
    std::vector<std::map<std::string, int>> frequency(n_clusters);
    std::vector<int> cluster_size(n_clusters, 0);

    for (std::size_t row = 0; row < ids.size(); ++row) {
        const auto it = corpus.tokens.find(ids[row]);
        if (it == corpus.tokens.end()) {
            throw ValidationError("cluster_terms: document '" + ids[row] + "' missing from corpus");
        }
        const int cluster = partition.membership[row];
        ++cluster_size[cluster];
        for (const auto& token : it->second) {
            ++frequency[cluster][lemmatise(token, lemmas)];
        }
    }

    std::map<std::string, int> cluster_count;  // k: clusters containing the lemma
    for (const auto& freq : frequency) {
        for (const auto& [lemma, count] : freq) ++cluster_count[lemma];
    }

    std::vector<ClusterSummary> summaries(n_clusters);
    for (int c = 0; c < n_clusters; ++c) {
        auto& summary = summaries[c];
        summary.cluster = c;
        summary.size = cluster_size[c];
        if (frequency[c].empty()) {
            summary.no_tokens = true;
            continue;
        }
        for (const auto& [lemma, count] : frequency[c]) {
            const double icf =
                std::log(1.0 + static_cast<double>(n_clusters) / cluster_count.at(lemma));
            summary.terms.push_back({lemma, count * icf});
        }
        std::sort(summary.terms.begin(), summary.terms.end(),
                  [](const TermWeight& a, const TermWeight& b) {
                      if (a.weight != b.weight) return a.weight > b.weight;
                      return a.lemma < b.lemma;
                  });
        if (static_cast<int>(summary.terms.size()) > top_n) summary.terms.resize(top_n);
    }
    return summaries;
}

}  // namespace mstopics
