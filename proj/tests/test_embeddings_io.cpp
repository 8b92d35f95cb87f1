#include <doctest.h>

#include "mstopics/embeddings_io.hpp"
#include "mstopics/errors.hpp"

#include <filesystem>
#include <fstream>

using namespace mstopics;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name, const std::string& content) {
    const fs::path path = fs::temp_directory_path() / name;
    std::ofstream out(path);
    out << content;
    return path;
}

}  // namespace

TEST_CASE("embeddings load parses ids and values") {
    const auto path = temp_file("emb_basic.tsv",
                                "id\tv0\tv1\n"
                                "doc1\t1.0\t0.0\n"
                                "doc2\t0.0\t1.0\n"
                                "doc3\t0.5\t0.5\n");
    const auto m = load_embeddings(path);
    CHECK(m.n() == 3);
    CHECK(m.dim() == 2);
    CHECK(m.ids == std::vector<std::string>{"doc1", "doc2", "doc3"});
    CHECK(m.vectors(0, 0) == 1.0);
    CHECK(m.vectors(2, 1) == 0.5);
}

TEST_CASE("embeddings survive a write/read round trip bitwise") {
    EmbeddingMatrix m;
    m.ids = {"a", "b"};
    m.vectors.resize(2, 3);
    m.vectors << 0.1, -2.5000000000000004, 1e-300, 3.141592653589793, -0.0, 7.0;
    m.vectors(1, 1) = 1.0;  // avoid the zero-norm check tripping on -0.0 rows

    const fs::path path = fs::temp_directory_path() / "emb_roundtrip.tsv";
    write_embeddings(m, path);
    const auto back = load_embeddings(path);
    CHECK(back.ids == m.ids);
    REQUIRE(back.vectors.rows() == m.vectors.rows());
    REQUIRE(back.vectors.cols() == m.vectors.cols());
    for (int i = 0; i < m.n(); ++i)
        for (int j = 0; j < m.dim(); ++j) CHECK(back.vectors(i, j) == m.vectors(i, j));
}

TEST_CASE("embeddings csv format works") {
    const auto path = temp_file("emb_basic.csv",
                                "id,v0,v1\n"
                                "x,1,2\n"
                                "y,3,4\n");
    const auto m = load_embeddings(path, TableFormat::csv);
    CHECK(m.n() == 2);
    CHECK(m.vectors(1, 0) == 3.0);
    CHECK(format_from_path(path) == TableFormat::csv);
    CHECK(format_from_path("foo.tsv") == TableFormat::tsv);
}

TEST_CASE("embeddings loader rejects bad input with line numbers") {
    SUBCASE("duplicate id") {
        const auto path = temp_file("emb_dup.tsv", "id\tv0\na\t1\na\t2\n");
        CHECK_THROWS_WITH_AS(load_embeddings(path), doctest::Contains("duplicate id 'a' at line 3"),
                             ValidationError);
    }
    SUBCASE("inconsistent dimension") {
        const auto path = temp_file("emb_dim.tsv", "id\tv0\tv1\na\t1\t2\nb\t3\n");
        CHECK_THROWS_WITH_AS(load_embeddings(path), doctest::Contains("line 3"), ValidationError);
    }
    SUBCASE("non-finite value") {
        const auto path = temp_file("emb_nan.tsv", "id\tv0\na\t1\nb\tnan\n");
        CHECK_THROWS_WITH_AS(load_embeddings(path), doctest::Contains("non-finite value at line 3"),
                             ValidationError);
    }
    SUBCASE("zero-norm vector") {
        const auto path = temp_file("emb_zero.tsv", "id\tv0\tv1\na\t1\t0\nb\t0\t0\n");
        CHECK_THROWS_WITH_AS(load_embeddings(path), doctest::Contains("zero-norm vector at line 3"),
                             ValidationError);
    }
    SUBCASE("unparseable number") {
        const auto path = temp_file("emb_garbage.tsv", "id\tv0\na\t1\nb\toops\n");
        CHECK_THROWS_AS(load_embeddings(path), ValidationError);
    }
    SUBCASE("single row is rejected") {
        const auto path = temp_file("emb_single.tsv", "id\tv0\na\t1\n");
        CHECK_THROWS_AS(load_embeddings(path), ValidationError);
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS(load_embeddings("/nonexistent/emb.tsv"), ValidationError);
    }
}

TEST_CASE("labels round trip and validate") {
    LabelSet labels;
    labels.name = "level1";
    labels.assignments = {{"doc1", "infection"}, {"doc2", "falls"}, {"doc3", "falls"}};

    const fs::path path = fs::temp_directory_path() / "labels_rt.tsv";
    write_labels(labels, path);
    const auto back = load_labels(path);
    CHECK(back.assignments == labels.assignments);
    CHECK(back.name == "labels_rt");
    CHECK(back.categories() == std::vector<std::string>{"falls", "infection"});
}

TEST_CASE("labels loader rejects conflicts and empty files") {
    SUBCASE("conflicting duplicate") {
        const auto path = temp_file("labels_conflict.tsv", "id\tlabel\na\tx\na\ty\n");
        CHECK_THROWS_WITH_AS(load_labels(path), doctest::Contains("conflicting labels for id 'a'"),
                             ValidationError);
    }
    SUBCASE("consistent duplicate is fine") {
        const auto path = temp_file("labels_dup_ok.tsv", "id\tlabel\na\tx\na\tx\n");
        CHECK(load_labels(path).assignments.size() == 1);
    }
    SUBCASE("empty") {
        const auto path = temp_file("labels_empty.tsv", "id\tlabel\n");
        CHECK_THROWS_AS(load_labels(path), ValidationError);
    }
}

TEST_CASE("orphan label detection") {
    EmbeddingMatrix m;
    m.ids = {"doc1", "doc2"};
    m.vectors = Eigen::MatrixXd::Identity(2, 2);

    LabelSet labels;
    labels.assignments = {{"doc1", "x"}, {"ghost", "y"}};
    CHECK(orphan_label_ids(labels, m) == std::vector<std::string>{"ghost"});
    CHECK_THROWS_AS(validate_labels(labels, m), ValidationError);

    labels.assignments.erase("ghost");
    CHECK(orphan_label_ids(labels, m).empty());
    CHECK_NOTHROW(validate_labels(labels, m));
}

TEST_CASE("tokenizer lowercases, strips punctuation, stop-words and digit tokens") {
    const std::unordered_set<std::string> stop = {"at", "the", "a"};

    SUBCASE("clinical note example") {
        const auto corpus = tokenize_corpus({{"d", "Patient fell at 3am!"}}, stop);
        CHECK(corpus.tokens.at("d") == std::vector<std::string>{"patient", "fell"});
    }
    SUBCASE("all-numeric text tokenizes to nothing") {
        const auto corpus = tokenize_corpus({{"d", "2014 03"}}, stop);
        CHECK(corpus.tokens.at("d").empty());
    }
    SUBCASE("repeats and order are preserved") {
        const auto corpus = tokenize_corpus({{"d", "Delayed discharge; discharge delayed."}}, stop);
        CHECK(corpus.tokens.at("d") ==
              std::vector<std::string>{"delayed", "discharge", "discharge", "delayed"});
    }
    SUBCASE("mixed alphanumeric tokens are dropped entirely") {
        const auto corpus = tokenize_corpus({{"d", "ward B4 closed"}}, stop);
        CHECK(corpus.tokens.at("d") == std::vector<std::string>{"ward", "closed"});
    }
    SUBCASE("stemmer hook applies after filtering") {
        const auto corpus = tokenize_corpus({{"d", "falls at night"}}, stop,
                                            [](const std::string& t) { return t.substr(0, 4); });
        CHECK(corpus.tokens.at("d") == std::vector<std::string>{"fall", "nigh"});
    }
    SUBCASE("empty corpus is an error") {
        CHECK_THROWS_AS(tokenize_corpus({}, stop), ValidationError);
    }
}

TEST_CASE("corpus file round trip with escaped text") {
    const std::map<std::string, std::string> docs = {
        {"a", "line one\nline two"},
        {"b", "tab\there"},
        {"c", "backslash \\ kept"},
    };
    const fs::path path = fs::temp_directory_path() / "corpus_rt.tsv";
    write_corpus(docs, path);
    CHECK(load_corpus(path) == docs);
}

TEST_CASE("corpus directory mode uses file stems as ids") {
    const fs::path dir = fs::temp_directory_path() / "corpus_dir_test";
    fs::create_directories(dir);
    { std::ofstream(dir / "note1.txt") << "first document"; }
    { std::ofstream(dir / "note2.txt") << "second document"; }
    const auto docs = load_corpus(dir);
    CHECK(docs.size() == 2);
    CHECK(docs.at("note1") == "first document");
    CHECK(docs.at("note2") == "second document");
}

TEST_CASE("stopword file loads lowercased, skipping comments") {
    const auto path = temp_file("stop.txt", "# common words\nThe\nat\n\na\n");
    const auto words = load_stopwords(path);
    CHECK(words == std::unordered_set<std::string>{"the", "at", "a"});
}
