#pragma once

#include "mstopics/synthetic.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace mstopics {

// Full pipeline configuration. Every subcommand reads the subset it needs;
// values come from built-in defaults, then an optional key=value config file,
// then command-line flags. The worker count deliberately never enters any
// config hash so artifacts stay comparable across thread counts.
struct RunConfig {
    std::string embeddings;
    std::string graph;  // graph artifact; empty means <out>/graph.tsv
    std::vector<std::string> labels;
    std::string corpus;
    std::string stopwords;
    std::string lemmas;
    std::string out = "out";

    int k = 13;

    double t_min = 0.01;
    double t_max = 100.0;
    double t_step = 0.01;   // linear spacing; default mirrors the 0.01..100 sweep
    int t_points = 100;     // log spacing point count
    bool log_grid = false;

    int n_runs = 500;
    int n_top = 50;
    std::uint64_t master_seed = 0;
    int workers = 0;  // 0 keeps the runtime default

    double plateau_threshold = -1.0;  // negative = auto
    int min_plateau_len = 5;
    int dip_window = 3;

    int n_nearest = 100;

    int top_n = 20;
    int scale = -1;  // -1 summarizes every robust scale

    bool force = false;
};

// Applies one `key=value` assignment; unknown keys are a ValidationError.
void set_config_key(RunConfig& config, const std::string& key, const std::string& value);

// Reads a plain key=value file (# comments and blank lines allowed).
RunConfig load_config_file(const std::filesystem::path& path, RunConfig base = {});

// Caps OpenMP and Eigen thread pools when workers > 0.
void apply_workers(const RunConfig& config);

std::filesystem::path graph_artifact_path(const RunConfig& config);
std::filesystem::path scan_dir(const RunConfig& config);
std::filesystem::path select_dir(const RunConfig& config);
std::filesystem::path evaluate_dir(const RunConfig& config);
std::filesystem::path summaries_dir(const RunConfig& config);

void cmd_build_graph(const RunConfig& config);
void cmd_scan(const RunConfig& config);
void cmd_select(const RunConfig& config);
void cmd_evaluate(const RunConfig& config);
void cmd_summarize(const RunConfig& config);

// Synthetic input generators backing the bench subcommand.
void cmd_bench_two_level(const TwoLevelParams& params, std::uint64_t seed,
                         const std::filesystem::path& out);
void cmd_bench_corpus(int n_docs, int dim, int n_coarse, int fine_per_coarse, std::uint64_t seed,
                      const std::filesystem::path& out);
void cmd_bench_random(int n, int dim, std::uint64_t seed, const std::filesystem::path& out);

}  // namespace mstopics
