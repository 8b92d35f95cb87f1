#include "mstopics/stages.hpp"

#include "mstopics/artifacts.hpp"
#include "mstopics/embeddings_io.hpp"
#include "mstopics/errors.hpp"
#include "mstopics/table_io.hpp"

#include <Eigen/Core>
#ifdef _OPENMP
#include <omp.h>
#endif

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mstopics {

namespace {

bool parse_bool(const std::string& value, const std::string& key) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw ValidationError("config key '" + key + "' expects a boolean, got '" + value + "'");
}

int parse_config_int(const std::string& value, const std::string& key) {
    try {
        std::size_t used = 0;
        const int v = std::stoi(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ValidationError("config key '" + key + "' expects an integer, got '" + value + "'");
    }
}

std::uint64_t parse_config_u64(const std::string& value, const std::string& key) {
    try {
        std::size_t used = 0;
        const std::uint64_t v = std::stoull(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ValidationError("config key '" + key + "' expects an unsigned integer, got '" +
                              value + "'");
    }
}

// Content hash of an input path; directories hash their sorted entries.
std::string input_hash(const std::filesystem::path& path) {
    if (std::filesystem::is_directory(path)) {
        std::vector<std::filesystem::path> entries;
        for (const auto& entry : std::filesystem::directory_iterator(path)) {
            if (entry.is_regular_file()) entries.push_back(entry.path());
        }
        std::sort(entries.begin(), entries.end());
        std::string combined;
        for (const auto& entry : entries) {
            combined += entry.filename().string();
            combined += '=';
            combined += hash_hex(fnv1a_file(entry));
            combined += '\n';
        }
        return hash_hex(fnv1a(combined));
    }
    return hash_hex(fnv1a_file(path));
}

std::string hash_of(const std::string& canonical) { return hash_hex(fnv1a(canonical)); }

std::vector<double> build_grid(const RunConfig& config) {
    if (config.log_grid) return log_time_grid(config.t_min, config.t_max, config.t_points);
    return linear_time_grid(config.t_min, config.t_max, config.t_step);
}

std::string grid_spec(const RunConfig& config) {
    std::ostringstream spec;
    if (config.log_grid) {
        spec << "log:" << format_double(config.t_min) << ':' << format_double(config.t_max) << ':'
             << config.t_points;
    } else {
        spec << "linear:" << format_double(config.t_min) << ':' << format_double(config.t_max)
             << ':' << format_double(config.t_step);
    }
    return spec.str();
}

void require_input(const std::string& path, const std::string& what) {
    if (path.empty()) throw ValidationError(what + " required (see --help)");
    if (!std::filesystem::exists(path)) throw ValidationError(what + " not found: " + path);
}

}  // namespace

void set_config_key(RunConfig& config, const std::string& key, const std::string& value) {
    if (key == "embeddings") config.embeddings = value;
    else if (key == "graph") config.graph = value;
    else if (key == "labels") {
        config.labels.clear();
        for (const auto& part : split(value, ',')) {
            if (!part.empty()) config.labels.push_back(part);
        }
    }
    else if (key == "corpus") config.corpus = value;
    else if (key == "stopwords") config.stopwords = value;
    else if (key == "lemmas") config.lemmas = value;
    else if (key == "out") config.out = value;
    else if (key == "k") config.k = parse_config_int(value, key);
    else if (key == "t_min") config.t_min = parse_double(value, "for config key t_min");
    else if (key == "t_max") config.t_max = parse_double(value, "for config key t_max");
    else if (key == "t_step") config.t_step = parse_double(value, "for config key t_step");
    else if (key == "t_points") config.t_points = parse_config_int(value, key);
    else if (key == "log_grid") config.log_grid = parse_bool(value, key);
    else if (key == "n_runs") config.n_runs = parse_config_int(value, key);
    else if (key == "n_top") config.n_top = parse_config_int(value, key);
    else if (key == "master_seed") config.master_seed = parse_config_u64(value, key);
    else if (key == "workers") config.workers = parse_config_int(value, key);
    else if (key == "plateau_threshold")
        config.plateau_threshold = parse_double(value, "for config key plateau_threshold");
    else if (key == "min_plateau_len") config.min_plateau_len = parse_config_int(value, key);
    else if (key == "dip_window") config.dip_window = parse_config_int(value, key);
    else if (key == "n_nearest") config.n_nearest = parse_config_int(value, key);
    else if (key == "top_n") config.top_n = parse_config_int(value, key);
    else if (key == "scale") config.scale = parse_config_int(value, key);
    else if (key == "force") config.force = parse_bool(value, key);
    else throw ValidationError("unknown config key '" + key + "'");
}

RunConfig load_config_file(const std::filesystem::path& path, RunConfig base) {
    auto in = open_for_read(path);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        chomp(line);
        if (line.empty() || line[0] == '#') continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw ValidationError("config file expects key=value at line " +
                                  std::to_string(line_no) + ": '" + line + "'");
        }
        set_config_key(base, line.substr(0, eq), line.substr(eq + 1));
    }
    return base;
}

void apply_workers(const RunConfig& config) {
    if (config.workers <= 0) return;
#ifdef _OPENMP
    omp_set_num_threads(config.workers);
#endif
    Eigen::setNbThreads(config.workers);
}

std::filesystem::path graph_artifact_path(const RunConfig& config) {
    if (!config.graph.empty()) return config.graph;
    return std::filesystem::path(config.out) / "graph.tsv";
}

std::filesystem::path scan_dir(const RunConfig& config) {
    return std::filesystem::path(config.out) / "scan";
}

std::filesystem::path select_dir(const RunConfig& config) {
    return std::filesystem::path(config.out) / "select";
}

std::filesystem::path evaluate_dir(const RunConfig& config) {
    return std::filesystem::path(config.out) / "evaluate";
}

std::filesystem::path summaries_dir(const RunConfig& config) {
    return std::filesystem::path(config.out) / "summaries";
}

void cmd_build_graph(const RunConfig& config) {
    require_input(config.embeddings, "embeddings file");
    const auto embeddings = load_embeddings(config.embeddings, format_from_path(config.embeddings));
    if (config.k < 0 || config.k > embeddings.n() - 1) {
        throw ValidationError("k must be between 0 and N-1 = " +
                              std::to_string(embeddings.n() - 1) + ", got " +
                              std::to_string(config.k));
    }

    const auto cosine = cosine_similarity_matrix(embeddings);
    const auto matrices = normalize_distance(cosine);
    const auto graph = graph_from_distance(matrices, config.k);

    const std::string embeddings_hash = input_hash(config.embeddings);
    ArtifactMeta meta;
    meta.stage = "build-graph";
    meta.master_seed = config.master_seed;
    meta.config_hash = hash_of("stage=build-graph\nembeddings=" + embeddings_hash +
                               "\nk=" + std::to_string(config.k) + "\n");
    meta.extra["k"] = config.k;
    meta.extra["embeddings_hash"] = embeddings_hash;
    write_graph(graph_artifact_path(config), graph, embeddings.ids, meta);
}

void cmd_scan(const RunConfig& config) {
    const auto graph = read_graph(graph_artifact_path(config));
    const auto grid = build_grid(config);

    ScanOptions options;
    options.n_runs = config.n_runs;
    options.n_top = config.n_top;
    options.master_seed = config.master_seed;
    const auto scan = scan_markov_times(graph.graph, grid, options);

    ArtifactMeta meta;
    meta.stage = "scan";
    meta.master_seed = config.master_seed;
    meta.upstream_hash = graph.meta.config_hash;
    meta.config_hash = hash_of("stage=scan\nupstream=" + meta.upstream_hash +
                               "\ngrid=" + grid_spec(config) +
                               "\nn_runs=" + std::to_string(config.n_runs) +
                               "\nn_top=" + std::to_string(config.n_top) +
                               "\nseed=" + std::to_string(config.master_seed) + "\n");
    meta.extra["grid"] = grid_spec(config);
    meta.extra["n_runs"] = config.n_runs;
    meta.extra["n_top"] = config.n_top;
    write_scan(scan_dir(config), scan, graph.ids, meta);
}

void cmd_select(const RunConfig& config) {
    const auto scan = read_scan(scan_dir(config));

    ScaleSelectionParams params;
    params.plateau_threshold = config.plateau_threshold;
    params.min_plateau_len = config.min_plateau_len;
    params.dip_window = config.dip_window;
    const auto scales = find_robust_scales(scan.scan, scan.scan.cross_vi, params);

    ArtifactMeta meta;
    meta.stage = "select";
    meta.master_seed = scan.meta.master_seed;
    meta.upstream_hash = scan.meta.config_hash;
    meta.config_hash = hash_of("stage=select\nupstream=" + meta.upstream_hash + "\nthreshold=" +
                               format_double(config.plateau_threshold) + "\nmin_plateau_len=" +
                               std::to_string(config.min_plateau_len) + "\ndip_window=" +
                               std::to_string(config.dip_window) + "\n");
    meta.extra["plateau_threshold"] = config.plateau_threshold;
    meta.extra["min_plateau_len"] = config.min_plateau_len;
    meta.extra["dip_window"] = config.dip_window;

    // Quasi-hierarchy between consecutive scales is reported, not asserted:
    // the multiscale output is not forced to nest.
    auto fractions = nlohmann::json::array();
    for (std::size_t i = 0; i + 1 < scales.size(); ++i) {
        fractions.push_back(
            quasi_hierarchy_fraction(scales[i + 1].partition, scales[i].partition));
    }
    meta.extra["quasi_hierarchy"] = fractions;

    write_scales(select_dir(config), scales, scan.ids, meta);
    for (std::size_t i = 0; i + 1 < scales.size(); ++i) {
        const auto flows = sankey_flows(scales[i + 1].partition, scales[i].partition);
        const auto name = "scale" + std::to_string(i + 1) + "_to_scale" + std::to_string(i) +
                          ".tsv";
        write_partition_flows(select_dir(config) / "flows" / name, flows, meta);
    }
}

void cmd_evaluate(const RunConfig& config) {
    if (config.labels.empty()) {
        throw ValidationError("evaluate needs at least one labels file (--labels)");
    }
    const auto scales = read_scales(select_dir(config));
    const auto scan_meta = read_meta(scan_dir(config) / "scan.tsv");
    require_chain(scales.meta, scan_meta, config.force);

    std::vector<LabelSet> label_sets;
    for (const auto& path : config.labels) {
        require_input(path, "labels file");
        label_sets.push_back(load_labels(path));
    }

    std::string labels_hash;
    for (const auto& path : config.labels) {
        labels_hash += input_hash(path);
        labels_hash += ',';
    }
    ArtifactMeta meta;
    meta.stage = "evaluate";
    meta.master_seed = scales.meta.master_seed;
    meta.upstream_hash = scales.meta.config_hash;
    meta.config_hash = hash_of("stage=evaluate\nupstream=" + meta.upstream_hash + "\nlabels=" +
                               labels_hash + "\nn_nearest=" + std::to_string(config.n_nearest) +
                               "\nembeddings=" +
                               (config.embeddings.empty() ? std::string("-")
                                                          : input_hash(config.embeddings)) +
                               "\n");

    const auto dir = evaluate_dir(config);
    std::vector<ScaleLabelMetrics> rows;
    for (std::size_t i = 0; i < scales.scales.size(); ++i) {
        const auto& scale = scales.scales[i];
        for (const auto& labels : label_sets) {
            const auto aligned = align_labels(labels, scale.partition, scales.ids);
            const auto label_part = Partition::from_labels(aligned.label_of);
            const auto community_part = Partition::from_labels(aligned.community_of);

            ScaleLabelMetrics row;
            row.scale = static_cast<int>(i);
            row.t_star = scale.t_star;
            row.n_communities = scale.n_communities;
            row.label = labels.name;
            row.categories = static_cast<int>(aligned.categories.size());
            row.coverage = aligned.coverage;
            row.u = uncertainty_coefficient(aligned);
            row.vi = variation_of_information(label_part, community_part);
            row.vi_normalized = variation_of_information(label_part, community_part, true);
            rows.push_back(std::move(row));

            const auto base_name = "scale" + std::to_string(i) + "_" + labels.name;
            write_contingency(dir / "contingency" / base_name, contingency_with_zscores(aligned),
                              meta);
            write_label_flows(dir / "flows" / (base_name + ".tsv"),
                              sankey_flows(scale.partition, labels, scales.ids), meta);
        }
    }
    write_metrics(dir / "metrics.tsv", rows, meta);

    // The centroid baseline needs the original vectors; graph-only pipelines
    // skip it and the metadata says so.
    ArtifactMeta centroid_meta = meta;
    if (config.embeddings.empty()) {
        centroid_meta.extra["centroid_benchmark"] = "skipped: no embeddings input";
        write_meta(dir / "centroid.tsv", centroid_meta);
    } else {
        require_input(config.embeddings, "embeddings file");
        const auto embeddings =
            load_embeddings(config.embeddings, format_from_path(config.embeddings));
        std::vector<CentroidBenchmarkRow> centroid_rows;
        for (const auto& labels : label_sets) {
            CentroidBenchmarkRow row;
            row.label = labels.name;
            row.categories = static_cast<int>(labels.categories().size());
            row.n_nearest = config.n_nearest;
            row.score = centroid_benchmark(embeddings, labels, config.n_nearest);
            row.max_score = row.categories * config.n_nearest;
            centroid_rows.push_back(std::move(row));
        }
        write_centroid_benchmark(dir / "centroid.tsv", centroid_rows, centroid_meta);
    }
}

void cmd_summarize(const RunConfig& config) {
    require_input(config.corpus, "corpus file or directory");
    const auto scales = read_scales(select_dir(config));
    const auto scan_meta = read_meta(scan_dir(config) / "scan.tsv");
    require_chain(scales.meta, scan_meta, config.force);
    if (scales.scales.empty()) {
        throw ValidationError("no robust scales to summarize; rerun select");
    }
    if (config.scale >= 0 && config.scale >= static_cast<int>(scales.scales.size())) {
        throw ValidationError("scale " + std::to_string(config.scale) + " out of range; select "
                              "found " + std::to_string(scales.scales.size()) + " scales");
    }

    const auto documents = load_corpus(config.corpus);
    std::unordered_set<std::string> stopwords;
    if (!config.stopwords.empty()) {
        require_input(config.stopwords, "stopwords file");
        stopwords = load_stopwords(config.stopwords);
    }
    LemmaTable lemmas;
    if (!config.lemmas.empty()) {
        require_input(config.lemmas, "lemma table file");
        lemmas = load_lemma_table(config.lemmas);
    }
    const auto corpus = tokenize_corpus(documents, stopwords);

    ArtifactMeta meta;
    meta.stage = "summarize";
    meta.master_seed = scales.meta.master_seed;
    meta.upstream_hash = scales.meta.config_hash;
    meta.config_hash = hash_of(
        "stage=summarize\nupstream=" + meta.upstream_hash + "\ncorpus=" +
        input_hash(config.corpus) + "\nstopwords=" +
        (config.stopwords.empty() ? std::string("-") : input_hash(config.stopwords)) +
        "\nlemmas=" + (config.lemmas.empty() ? std::string("-") : input_hash(config.lemmas)) +
        "\ntop_n=" + std::to_string(config.top_n) + "\nscale=" + std::to_string(config.scale) +
        "\n");
    meta.extra["weighting"] = "cluster term frequency * ln(1 + n_clusters/n_clusters_with_term)";
    meta.extra["top_n"] = config.top_n;

    for (std::size_t i = 0; i < scales.scales.size(); ++i) {
        if (config.scale >= 0 && static_cast<int>(i) != config.scale) continue;
        const auto summaries =
            cluster_terms(corpus, scales.scales[i].partition, scales.ids, config.top_n, lemmas);
        write_cluster_summaries(summaries_dir(config) / ("scale" + std::to_string(i)), summaries,
                                meta);
    }
}

void cmd_bench_two_level(const TwoLevelParams& params, std::uint64_t seed,
                         const std::filesystem::path& out) {
    const auto bench = two_level_benchmark(params, seed);

    std::vector<std::string> ids;
    ids.reserve(bench.graph.n);
    for (int i = 0; i < bench.graph.n; ++i) ids.push_back("node" + std::to_string(i));

    ArtifactMeta meta;
    meta.stage = "bench-two-level";
    meta.master_seed = seed;
    meta.config_hash = hash_of(
        "stage=bench-two-level\nn_blocks=" + std::to_string(params.n_blocks) + "\nblock_size=" +
        std::to_string(params.block_size) + "\nn_super=" + std::to_string(params.n_super) +
        "\np_in=" + format_double(params.p_in) + "\np_mid=" + format_double(params.p_mid) +
        "\np_out=" + format_double(params.p_out) + "\nseed=" + std::to_string(seed) + "\n");
    meta.extra["n_blocks"] = params.n_blocks;
    meta.extra["block_size"] = params.block_size;
    meta.extra["n_super"] = params.n_super;
    write_graph(out / "graph.tsv", bench.graph, ids, meta);

    const std::vector<std::string> comments = {"config_hash " + meta.config_hash};
    LabelSet coarse;
    coarse.name = "level1";
    LabelSet fine;
    fine.name = "level2";
    for (int i = 0; i < bench.graph.n; ++i) {
        coarse.assignments[ids[i]] = "super" + std::to_string(bench.coarse.membership[i]);
        fine.assignments[ids[i]] = "block" + std::to_string(bench.fine.membership[i]);
    }
    write_labels(coarse, out / "level1.tsv", comments);
    write_labels(fine, out / "level2.tsv", comments);
}

void cmd_bench_corpus(int n_docs, int dim, int n_coarse, int fine_per_coarse, std::uint64_t seed,
                      const std::filesystem::path& out) {
    const auto corpus = hierarchical_corpus(n_docs, dim, n_coarse, fine_per_coarse, seed);
    std::filesystem::create_directories(out);

    const std::string config_hash = hash_of(
        "stage=bench-corpus\nn_docs=" + std::to_string(n_docs) + "\ndim=" + std::to_string(dim) +
        "\nn_coarse=" + std::to_string(n_coarse) + "\nfine_per_coarse=" +
        std::to_string(fine_per_coarse) + "\nseed=" + std::to_string(seed) + "\n");
    const std::vector<std::string> comments = {"config_hash " + config_hash};

    write_embeddings(corpus.embeddings, out / "embeddings.tsv", TableFormat::tsv, comments);
    write_labels(corpus.coarse_labels, out / "level1.tsv", comments);
    write_labels(corpus.fine_labels, out / "level2.tsv", comments);
    write_corpus(corpus.documents, out / "corpus.tsv", comments);
}

void cmd_bench_random(int n, int dim, std::uint64_t seed, const std::filesystem::path& out) {
    const auto embeddings = random_embeddings(n, dim, seed);
    std::filesystem::create_directories(out);
    const std::string config_hash =
        hash_of("stage=bench-random\nn=" + std::to_string(n) + "\ndim=" + std::to_string(dim) +
                "\nseed=" + std::to_string(seed) + "\n");
    write_embeddings(embeddings, out / "embeddings.tsv", TableFormat::tsv,
                     {"config_hash " + config_hash});
}

}  // namespace mstopics
