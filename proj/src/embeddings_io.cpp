#include "mstopics/embeddings_io.hpp"

#include "mstopics/errors.hpp"
#include "mstopics/table_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>

namespace mstopics {

std::vector<std::string> split(const std::string& line, char delim) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(delim, start);
        if (pos == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return fields;
}

double parse_double(const std::string& field, const std::string& context) {
    double value = 0.0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end) {
        throw ValidationError("unparseable number '" + field + "' " + context);
    }
    return value;
}

std::ifstream open_for_read(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open file: " + path.string());
    return in;
}

std::ofstream open_for_write(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write file: " + path.string());
    return out;
}

void chomp(std::string& line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
}

std::string format_double(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, ptr);
}

namespace {

char delimiter_for(TableFormat format) {
    return format == TableFormat::tsv ? '\t' : ',';
}

std::string escape_text(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '\t': out += "\\t"; break;
            case '\n': out += "\\n"; break;
            case '\\': out += "\\\\"; break;
            default: out += c;
        }
    }
    return out;
}

std::string unescape_text(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '\\' && i + 1 < text.size()) {
            ++i;
            switch (text[i]) {
                case 't': out += '\t'; break;
                case 'n': out += '\n'; break;
                case '\\': out += '\\'; break;
                default: out += text[i];
            }
        } else {
            out += text[i];
        }
    }
    return out;
}

}  // namespace

std::vector<std::string> LabelSet::categories() const {
    std::vector<std::string> out;
    for (const auto& [id, category] : assignments) out.push_back(category);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

TableFormat format_from_path(const std::filesystem::path& path) {
    return path.extension() == ".csv" ? TableFormat::csv : TableFormat::tsv;
}

EmbeddingMatrix load_embeddings(const std::filesystem::path& path, TableFormat format) {
    auto in = open_for_read(path);
    const char delim = delimiter_for(format);

    std::string line;
    int line_no = 0;
    // Header: id followed by d value columns.
    int dim = -1;
    while (std::getline(in, line)) {
        ++line_no;
        chomp(line);
        if (line.empty() || line[0] == '#') continue;
        dim = static_cast<int>(split(line, delim).size()) - 1;
        break;
    }
    if (dim < 1) throw ValidationError("embeddings file has no header or no value columns: " + path.string());

    std::vector<std::string> ids;
    std::vector<double> values;
    std::unordered_map<std::string, int> seen;
    while (std::getline(in, line)) {
        ++line_no;
        chomp(line);
        if (line.empty() || line[0] == '#') continue;
        const auto fields = split(line, delim);
        if (static_cast<int>(fields.size()) != dim + 1) {
            throw ValidationError("inconsistent dimension at line " + std::to_string(line_no) +
                                  ": expected " + std::to_string(dim) + " values, got " +
                                  std::to_string(fields.size() - 1));
        }
        if (!seen.emplace(fields[0], line_no).second) {
            throw ValidationError("duplicate id '" + fields[0] + "' at line " + std::to_string(line_no));
        }
        ids.push_back(fields[0]);
        double norm_sq = 0.0;
        for (int j = 0; j < dim; ++j) {
            const double v = parse_double(fields[j + 1], "at line " + std::to_string(line_no));
            if (!std::isfinite(v)) {
                throw ValidationError("non-finite value at line " + std::to_string(line_no));
            }
            norm_sq += v * v;
            values.push_back(v);
        }
        if (norm_sq == 0.0) {
            throw ValidationError("zero-norm vector at line " + std::to_string(line_no));
        }
    }

    const int n = static_cast<int>(ids.size());
    if (n < 2) throw ValidationError("embeddings file needs at least 2 rows: " + path.string());

    EmbeddingMatrix matrix;
    matrix.ids = std::move(ids);
    matrix.vectors.resize(n, dim);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < dim; ++j) matrix.vectors(i, j) = values[static_cast<std::size_t>(i) * dim + j];
    return matrix;
}

void write_embeddings(const EmbeddingMatrix& matrix, const std::filesystem::path& path,
                      TableFormat format, const std::vector<std::string>& comments) {
    auto out = open_for_write(path);
    const char delim = delimiter_for(format);
    for (const auto& comment : comments) out << "# " << comment << '\n';
    out << "id";
    for (int j = 0; j < matrix.dim(); ++j) out << delim << 'v' << j;
    out << '\n';
    for (int i = 0; i < matrix.n(); ++i) {
        out << matrix.ids[i];
        for (int j = 0; j < matrix.dim(); ++j) out << delim << format_double(matrix.vectors(i, j));
        out << '\n';
    }
}

LabelSet load_labels(const std::filesystem::path& path) {
    auto in = open_for_read(path);
    LabelSet labels;
    labels.name = path.stem().string();

    std::string line;
    int line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        chomp(line);
        if (line.empty() || line[0] == '#') continue;
        const auto fields = split(line, '\t');
        if (fields.size() != 2) {
            throw ValidationError("labels file expects 'id<TAB>label' at line " + std::to_string(line_no));
        }
        if (!header_seen) {  // header row `id<TAB>label`
            header_seen = true;
            continue;
        }
        const auto it = labels.assignments.find(fields[0]);
        if (it != labels.assignments.end()) {
            if (it->second != fields[1]) {
                throw ValidationError("conflicting labels for id '" + fields[0] + "' at line " +
                                      std::to_string(line_no));
            }
            continue;
        }
        labels.assignments.emplace(fields[0], fields[1]);
    }
    if (labels.assignments.empty()) throw ValidationError("empty labels file: " + path.string());
    return labels;
}

void write_labels(const LabelSet& labels, const std::filesystem::path& path,
                  const std::vector<std::string>& comments) {
    auto out = open_for_write(path);
    for (const auto& comment : comments) out << "# " << comment << '\n';
    out << "id\tlabel\n";
    for (const auto& [id, category] : labels.assignments) out << id << '\t' << category << '\n';
}

std::vector<std::string> orphan_label_ids(const LabelSet& labels, const EmbeddingMatrix& matrix) {
    std::unordered_set<std::string> known(matrix.ids.begin(), matrix.ids.end());
    std::vector<std::string> orphans;
    for (const auto& [id, category] : labels.assignments) {
        if (!known.count(id)) orphans.push_back(id);
    }
    return orphans;
}

void validate_labels(const LabelSet& labels, const EmbeddingMatrix& matrix) {
    const auto orphans = orphan_label_ids(labels, matrix);
    if (orphans.empty()) return;
    std::ostringstream msg;
    msg << "labels reference unknown document ids:";
    for (const auto& id : orphans) msg << ' ' << id;
    throw ValidationError(msg.str());
}

TokenizedCorpus tokenize_corpus(const std::map<std::string, std::string>& documents,
                                const std::unordered_set<std::string>& stopwords,
                                const TokenTransform& stem) {
    if (documents.empty()) throw ValidationError("tokenize_corpus: no documents");

    TokenizedCorpus corpus;
    for (const auto& [id, text] : documents) {
        std::vector<std::string> tokens;
        std::string current;
        bool has_digit = false;
        auto flush = [&] {
            if (!current.empty() && !has_digit && !stopwords.count(current)) {
                tokens.push_back(stem ? stem(current) : current);
            }
            current.clear();
            has_digit = false;
        };
        for (unsigned char c : text) {
            if (std::isalnum(c) || c >= 0x80) {  // keep non-ASCII bytes intact
                if (std::isdigit(c)) has_digit = true;
                current += static_cast<char>(std::tolower(c));
            } else {
                flush();
            }
        }
        flush();
        corpus.tokens.emplace(id, std::move(tokens));
    }
    return corpus;
}

std::map<std::string, std::string> load_corpus(const std::filesystem::path& path) {
    std::map<std::string, std::string> documents;

    if (std::filesystem::is_directory(path)) {
        for (const auto& entry : std::filesystem::directory_iterator(path)) {
            if (!entry.is_regular_file()) continue;
            std::ifstream in(entry.path());
            std::ostringstream text;
            text << in.rdbuf();
            documents[entry.path().stem().string()] = text.str();
        }
        if (documents.empty()) throw ValidationError("corpus directory is empty: " + path.string());
        return documents;
    }

    auto in = open_for_read(path);
    std::string line;
    int line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        chomp(line);
        if (line.empty() || line[0] == '#') continue;
        const std::size_t tab = line.find('\t');
        if (tab == std::string::npos) {
            throw ValidationError("corpus file expects 'id<TAB>text' at line " + std::to_string(line_no));
        }
        if (!header_seen) {
            header_seen = true;
            continue;
        }
        documents[line.substr(0, tab)] = unescape_text(line.substr(tab + 1));
    }
    if (documents.empty()) throw ValidationError("empty corpus file: " + path.string());
    return documents;
}

void write_corpus(const std::map<std::string, std::string>& documents,
                  const std::filesystem::path& path,
                  const std::vector<std::string>& comments) {
    auto out = open_for_write(path);
    for (const auto& comment : comments) out << "# " << comment << '\n';
    out << "id\ttext\n";
    for (const auto& [id, text] : documents) out << id << '\t' << escape_text(text) << '\n';
}

std::unordered_set<std::string> load_stopwords(const std::filesystem::path& path) {
    auto in = open_for_read(path);
    std::unordered_set<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        chomp(line);
        if (line.empty() || line[0] == '#') continue;
        std::transform(line.begin(), line.end(), line.begin(),
                       [](unsigned char c) { return std::tolower(c); });
        words.insert(line);
    }
    return words;
}

}  // namespace mstopics
