#pragma once

#include <Eigen/Core>

#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <unordered_set>
#include <vector>

namespace mstopics {

// N document vectors of dimension d. Rows align index-wise with ids.
struct EmbeddingMatrix {
    std::vector<std::string> ids;
    Eigen::MatrixXd vectors;

    int n() const { return static_cast<int>(vectors.rows()); }
    int dim() const { return static_cast<int>(vectors.cols()); }
};

// External category assignment, e.g. a hand-coded classification level.
struct LabelSet {
    std::string name;
    std::map<std::string, std::string> assignments;  // document id -> category

    std::vector<std::string> categories() const;  // sorted, unique
};

struct TokenizedCorpus {
    std::map<std::string, std::vector<std::string>> tokens;  // id -> ordered tokens
};

enum class TableFormat { tsv, csv };

TableFormat format_from_path(const std::filesystem::path& path);

EmbeddingMatrix load_embeddings(const std::filesystem::path& path,
                                TableFormat format = TableFormat::tsv);
// `comments` lines are emitted as leading # lines; loaders skip them.
void write_embeddings(const EmbeddingMatrix& matrix, const std::filesystem::path& path,
                      TableFormat format = TableFormat::tsv,
                      const std::vector<std::string>& comments = {});

LabelSet load_labels(const std::filesystem::path& path);
void write_labels(const LabelSet& labels, const std::filesystem::path& path,
                  const std::vector<std::string>& comments = {});

// Label ids with no matching embedding row. Non-empty in strict mode is an error.
std::vector<std::string> orphan_label_ids(const LabelSet& labels, const EmbeddingMatrix& matrix);
void validate_labels(const LabelSet& labels, const EmbeddingMatrix& matrix);

// Optional pluggable transform applied to each surviving token (e.g. a stemmer).
using TokenTransform = std::function<std::string(const std::string&)>;

// Lowercases, splits on non-alphanumeric characters, drops stop-words and
// tokens containing digits. Empty token lists are allowed.
TokenizedCorpus tokenize_corpus(const std::map<std::string, std::string>& documents,
                                const std::unordered_set<std::string>& stopwords,
                                const TokenTransform& stem = {});

// `id<TAB>text` file (text tab/newline-escaped), or a directory with one
// document per file (id = file stem).
std::map<std::string, std::string> load_corpus(const std::filesystem::path& path);
void write_corpus(const std::map<std::string, std::string>& documents,
                  const std::filesystem::path& path,
                  const std::vector<std::string>& comments = {});

std::unordered_set<std::string> load_stopwords(const std::filesystem::path& path);

}  // namespace mstopics
