#include "mstopics/artifacts.hpp"

#include "mstopics/errors.hpp"
#include "mstopics/table_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace mstopics {

namespace {

int parse_int(const std::string& field, const std::string& context) {
    int value = 0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end) {
        throw ValidationError("unparseable integer '" + field + "' " + context);
    }
    return value;
}

// Reads one artifact table, skipping # comments and the column header line.
std::vector<std::vector<std::string>> read_rows(const std::filesystem::path& path,
                                                std::size_t n_fields) {
    if (!std::filesystem::exists(path)) throw MissingArtifactError(path.string());
    auto in = open_for_read(path);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        chomp(line);
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            header_seen = true;
            continue;
        }
        auto fields = split(line, '\t');
        if (fields.size() != n_fields) {
            throw ValidationError("bad row in " + path.string() + ": expected " +
                                  std::to_string(n_fields) + " fields, got '" + line + "'");
        }
        rows.push_back(std::move(fields));
    }
    return rows;
}

std::ofstream open_artifact(const std::filesystem::path& path, const ArtifactMeta& meta) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    auto out = open_for_write(path);
    out << "# config_hash " << meta.config_hash << "\n";
    return out;
}

void write_partition_file(const std::filesystem::path& path, const Partition& partition,
                          const std::vector<std::string>& ids, const ArtifactMeta& meta,
                          const std::string& note) {
    auto out = open_artifact(path, meta);
    if (!note.empty()) out << "# " << note << "\n";
    out << "id\tcommunity\n";
    for (int i = 0; i < partition.size(); ++i) {
        out << ids[i] << '\t' << partition.membership[i] << '\n';
    }
}

Partition read_partition_file(const std::filesystem::path& path,
                              const std::vector<std::string>& ids) {
    const auto rows = read_rows(path, 2);
    if (rows.size() != ids.size()) {
        throw ValidationError("partition file " + path.string() + " covers " +
                              std::to_string(rows.size()) + " documents, expected " +
                              std::to_string(ids.size()));
    }
    std::vector<int> labels(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i][0] != ids[i]) {
            throw ValidationError("partition file " + path.string() + " row " +
                                  std::to_string(i) + " has id '" + rows[i][0] +
                                  "', expected '" + ids[i] + "'");
        }
        labels[i] = parse_int(rows[i][1], "in " + path.string());
    }
    return Partition::from_labels(labels);
}

std::vector<std::string> ids_from_meta(const ArtifactMeta& meta,
                                       const std::filesystem::path& origin) {
    if (!meta.extra.contains("ids") || !meta.extra["ids"].is_array()) {
        throw ValidationError("metadata for " + origin.string() + " lacks the node id list");
    }
    return meta.extra["ids"].get<std::vector<std::string>>();
}

}  // namespace

std::uint64_t fnv1a(std::string_view bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::uint64_t fnv1a_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MissingArtifactError(path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return fnv1a(buffer.str());
}

std::string hash_hex(std::uint64_t value) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(value));
    return buf;
}

std::filesystem::path meta_path(const std::filesystem::path& artifact) {
    std::filesystem::path p = artifact;
    p.replace_extension(".meta.json");
    return p;
}

void write_meta(const std::filesystem::path& artifact, const ArtifactMeta& meta) {
    nlohmann::json j;
    j["stage"] = meta.stage;
    j["config_hash"] = meta.config_hash;
    j["upstream_hash"] = meta.upstream_hash;
    j["master_seed"] = meta.master_seed;
    j["extra"] = meta.extra;
    auto out = open_for_write(meta_path(artifact));
    out << j.dump(2) << "\n";
}

ArtifactMeta read_meta(const std::filesystem::path& artifact) {
    const auto path = meta_path(artifact);
    std::ifstream in(path);
    if (!in) throw MissingArtifactError(path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("corrupt metadata " + path.string() + ": " + e.what());
    }
    ArtifactMeta meta;
    meta.stage = j.value("stage", "");
    meta.config_hash = j.value("config_hash", "");
    meta.upstream_hash = j.value("upstream_hash", "");
    meta.master_seed = j.value("master_seed", std::uint64_t{0});
    meta.extra = j.value("extra", nlohmann::json::object());
    return meta;
}

void require_chain(const ArtifactMeta& child, const ArtifactMeta& parent, bool force) {
    if (child.upstream_hash == parent.config_hash) return;
    if (force) return;
    throw ValidationError("provenance mismatch: " + child.stage + " output was produced from "
                          "config " + child.upstream_hash + " but the supplied " + parent.stage +
                          " artifact has config " + parent.config_hash +
                          "; rerun the upstream stage or pass --force");
}

void write_graph(const std::filesystem::path& path, const SparseGraph& graph,
                 const std::vector<std::string>& ids, const ArtifactMeta& meta) {
    if (static_cast<int>(ids.size()) != graph.n) {
        throw ValidationError("write_graph: id list does not match node count");
    }
    auto out = open_artifact(path, meta);
    out << "# n " << graph.n << "\n";
    out << "u\tv\tweight\n";
    for (const auto& e : graph.edges) {
        out << e.u << '\t' << e.v << '\t' << format_double(e.weight) << '\n';
    }
    ArtifactMeta full = meta;
    full.extra["n"] = graph.n;
    full.extra["n_edges"] = graph.edges.size();
    full.extra["ids"] = ids;
    write_meta(path, full);
}

GraphArtifact read_graph(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) throw MissingArtifactError(path.string());
    GraphArtifact artifact;
    artifact.meta = read_meta(path);
    artifact.ids = ids_from_meta(artifact.meta, path);
    artifact.graph.n = static_cast<int>(artifact.ids.size());
    for (const auto& row : read_rows(path, 3)) {
        Edge e;
        e.u = parse_int(row[0], "in " + path.string());
        e.v = parse_int(row[1], "in " + path.string());
        e.weight = parse_double(row[2], "in " + path.string());
        if (e.u < 0 || e.v < 0 || e.u >= artifact.graph.n || e.v >= artifact.graph.n) {
            throw ValidationError("edge endpoint out of range in " + path.string());
        }
        artifact.graph.edges.push_back(e);
    }
    return artifact;
}

void write_scan(const std::filesystem::path& dir, const StabilityScan& scan,
                const std::vector<std::string>& ids, const ArtifactMeta& meta) {
    std::filesystem::create_directories(dir / "partitions");

    auto table = open_artifact(dir / "scan.tsv", meta);
    table << "index\tt\tn_communities\tstability\tensemble_vi\tpartition\n";
    for (std::size_t i = 0; i < scan.records.size(); ++i) {
        const auto& rec = scan.records[i];
        char name[32];
        std::snprintf(name, sizeof(name), "t%04zu.tsv", i);
        const std::string rel = std::string("partitions/") + name;
        table << i << '\t' << format_double(rec.t) << '\t' << rec.n_communities << '\t'
              << format_double(rec.stability) << '\t' << format_double(rec.ensemble_vi) << '\t'
              << rel << '\n';
        write_partition_file(dir / rel, rec.best, ids, meta, "t " + format_double(rec.t));
    }

    auto cross = open_artifact(dir / "cross_vi.tsv", meta);
    cross << 't';
    for (double t : scan.cross_vi.t_grid) cross << '\t' << format_double(t);
    cross << '\n';
    for (Eigen::Index i = 0; i < scan.cross_vi.matrix.rows(); ++i) {
        cross << format_double(scan.cross_vi.t_grid[i]);
        for (Eigen::Index j = 0; j < scan.cross_vi.matrix.cols(); ++j) {
            cross << '\t' << format_double(scan.cross_vi.matrix(i, j));
        }
        cross << '\n';
    }

    ArtifactMeta full = meta;
    full.extra["n_times"] = scan.records.size();
    full.extra["ids"] = ids;
    write_meta(dir / "scan.tsv", full);
}

ScanArtifact read_scan(const std::filesystem::path& dir) {
    const auto table_path = dir / "scan.tsv";
    if (!std::filesystem::exists(table_path)) throw MissingArtifactError(table_path.string());
    ScanArtifact artifact;
    artifact.meta = read_meta(table_path);
    artifact.ids = ids_from_meta(artifact.meta, table_path);

    for (const auto& row : read_rows(table_path, 6)) {
        ScanRecord rec;
        rec.t = parse_double(row[1], "in " + table_path.string());
        rec.n_communities = parse_int(row[2], "in " + table_path.string());
        rec.stability = parse_double(row[3], "in " + table_path.string());
        rec.ensemble_vi = parse_double(row[4], "in " + table_path.string());
        rec.best = read_partition_file(dir / row[5], artifact.ids);
        if (rec.best.n_communities != rec.n_communities) {
            throw ValidationError("scan record " + row[0] + " community count disagrees with " +
                                  row[5]);
        }
        artifact.scan.records.push_back(std::move(rec));
    }

    const auto cross_path = dir / "cross_vi.tsv";
    const std::size_t m = artifact.scan.records.size();
    const auto rows = read_rows(cross_path, m + 1);
    if (rows.size() != m) {
        throw ValidationError("cross_vi.tsv has " + std::to_string(rows.size()) +
                              " rows, scan has " + std::to_string(m) + " times");
    }
    artifact.scan.cross_vi.matrix.resize(m, m);
    for (std::size_t i = 0; i < m; ++i) {
        artifact.scan.cross_vi.t_grid.push_back(
            parse_double(rows[i][0], "in " + cross_path.string()));
        for (std::size_t j = 0; j < m; ++j) {
            artifact.scan.cross_vi.matrix(i, j) =
                parse_double(rows[i][j + 1], "in " + cross_path.string());
        }
    }
    for (std::size_t i = 0; i < m; ++i) {
        if (artifact.scan.cross_vi.t_grid[i] != artifact.scan.records[i].t) {
            throw ValidationError("cross_vi.tsv grid disagrees with scan.tsv");
        }
    }
    return artifact;
}

void write_scales(const std::filesystem::path& dir, const std::vector<RobustScale>& scales,
                  const std::vector<std::string>& ids, const ArtifactMeta& meta) {
    std::filesystem::create_directories(dir / "scales");

    auto table = open_artifact(dir / "scales.tsv", meta);
    table << "scale\tt_star\tn_communities\tindex_lo\tindex_hi\tt_lo\tt_hi\tdip_depth\t"
             "plateau_score\tpartition\n";
    for (std::size_t i = 0; i < scales.size(); ++i) {
        const auto& s = scales[i];
        const std::string rel = "scales/scale" + std::to_string(i) + ".tsv";
        table << i << '\t' << format_double(s.t_star) << '\t' << s.n_communities << '\t'
              << s.index_lo << '\t' << s.index_hi << '\t' << format_double(s.t_lo) << '\t'
              << format_double(s.t_hi) << '\t' << format_double(s.dip_depth) << '\t'
              << format_double(s.plateau_score) << '\t' << rel << '\n';
        write_partition_file(dir / rel, s.partition, ids, meta,
                             "t_star " + format_double(s.t_star));
    }

    ArtifactMeta full = meta;
    full.extra["n_scales"] = scales.size();
    full.extra["ids"] = ids;
    write_meta(dir / "scales.tsv", full);
}

ScalesArtifact read_scales(const std::filesystem::path& dir) {
    const auto table_path = dir / "scales.tsv";
    if (!std::filesystem::exists(table_path)) throw MissingArtifactError(table_path.string());
    ScalesArtifact artifact;
    artifact.meta = read_meta(table_path);
    artifact.ids = ids_from_meta(artifact.meta, table_path);

    for (const auto& row : read_rows(table_path, 10)) {
        RobustScale s;
        s.t_star = parse_double(row[1], "in " + table_path.string());
        s.n_communities = parse_int(row[2], "in " + table_path.string());
        s.index_lo = parse_int(row[3], "in " + table_path.string());
        s.index_hi = parse_int(row[4], "in " + table_path.string());
        s.t_lo = parse_double(row[5], "in " + table_path.string());
        s.t_hi = parse_double(row[6], "in " + table_path.string());
        s.dip_depth = parse_double(row[7], "in " + table_path.string());
        s.plateau_score = parse_double(row[8], "in " + table_path.string());
        s.partition = read_partition_file(dir / row[9], artifact.ids);
        artifact.scales.push_back(std::move(s));
    }
    return artifact;
}

void write_partition_flows(const std::filesystem::path& path,
                           const std::vector<PartitionFlow>& flows, const ArtifactMeta& meta) {
    auto out = open_artifact(path, meta);
    out << "fine\tcoarse\tcount\n";
    for (const auto& f : flows) out << f.fine << '\t' << f.coarse << '\t' << f.count << '\n';
}

void write_label_flows(const std::filesystem::path& path, const std::vector<LabelFlow>& flows,
                       const ArtifactMeta& meta) {
    auto out = open_artifact(path, meta);
    out << "fine\tcategory\tcount\n";
    for (const auto& f : flows) out << f.fine << '\t' << f.category << '\t' << f.count << '\n';
}

void write_contingency(const std::filesystem::path& base, const ContingencyTable& table,
                       const ArtifactMeta& meta) {
    auto counts = open_artifact(base.string() + ".counts.tsv", meta);
    auto zscores = open_artifact(base.string() + ".zscores.tsv", meta);
    counts << "category";
    zscores << "category";
    for (int c : table.col_clusters) {
        counts << "\tc" << c;
        zscores << "\tc" << c;
    }
    counts << '\n';
    zscores << '\n';
    for (std::size_t i = 0; i < table.row_names.size(); ++i) {
        counts << table.row_names[i];
        zscores << table.row_names[i];
        for (Eigen::Index j = 0; j < table.counts.cols(); ++j) {
            counts << '\t' << table.counts(static_cast<Eigen::Index>(i), j);
            zscores << '\t' << format_double(table.z_scores(static_cast<Eigen::Index>(i), j));
        }
        counts << '\n';
        zscores << '\n';
    }

    ArtifactMeta full = meta;
    full.extra["coverage"] = table.coverage;
    full.extra["z_score"] = "standardized Pearson residual (n_ij - E_ij)/sqrt(E_ij(1-r_i/n)(1-c_j/n))";
    write_meta(base, full);
}

void write_metrics(const std::filesystem::path& path, const std::vector<ScaleLabelMetrics>& rows,
                   const ArtifactMeta& meta) {
    auto out = open_artifact(path, meta);
    out << "scale\tt_star\tn_communities\tlabel\tcategories\tcoverage\tuncertainty_coefficient\t"
           "vi\tvi_normalized\n";
    for (const auto& r : rows) {
        out << r.scale << '\t' << format_double(r.t_star) << '\t' << r.n_communities << '\t'
            << r.label << '\t' << r.categories << '\t' << r.coverage << '\t' << format_double(r.u)
            << '\t' << format_double(r.vi) << '\t' << format_double(r.vi_normalized) << '\n';
    }
    write_meta(path, meta);
}

void write_centroid_benchmark(const std::filesystem::path& path,
                              const std::vector<CentroidBenchmarkRow>& rows,
                              const ArtifactMeta& meta) {
    auto out = open_artifact(path, meta);
    out << "label\tcategories\tn_nearest\tscore\tmax_score\n";
    for (const auto& r : rows) {
        out << r.label << '\t' << r.categories << '\t' << r.n_nearest << '\t' << r.score << '\t'
            << r.max_score << '\n';
    }
    write_meta(path, meta);
}

void write_cluster_summaries(const std::filesystem::path& dir,
                             const std::vector<ClusterSummary>& summaries,
                             const ArtifactMeta& meta) {
    std::filesystem::create_directories(dir);
    auto index = open_artifact(dir / "summaries.tsv", meta);
    index << "cluster\tsize\tno_tokens\tfile\n";
    for (const auto& summary : summaries) {
        const std::string rel = "cluster" + std::to_string(summary.cluster) + ".tsv";
        index << summary.cluster << '\t' << summary.size << '\t' << (summary.no_tokens ? 1 : 0)
              << '\t' << rel << '\n';
        auto out = open_artifact(dir / rel, meta);
        out << "# cluster " << summary.cluster << " size " << summary.size << "\n";
        if (summary.no_tokens) out << "# no_tokens\n";
        out << "lemma\tweight\n";
        for (const auto& term : summary.terms) {
            out << term.lemma << '\t' << format_double(term.weight) << '\n';
        }
    }
    write_meta(dir / "summaries.tsv", meta);
}

}  // namespace mstopics
