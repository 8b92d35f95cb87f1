#include "mstopics/errors.hpp"
#include "mstopics/stages.hpp"

#include <CLI11.hpp>

#include <cstring>
#include <iostream>
#include <string>

namespace {

// The config file must apply before flag values, but CLI11 writes bound
// variables during parse. Pre-scanning for --config lets the file seed the
// defaults that the real parse then overrides.
std::string find_config_arg(int argc, char** argv) {
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--config") == 0 && i + 1 < argc) return argv[i + 1];
        if (std::strncmp(argv[i], "--config=", 9) == 0) return argv[i] + 9;
    }
    return {};
}

void add_common(CLI::App* sub, mstopics::RunConfig& config, std::string& config_path) {
    sub->add_option("--config", config_path, "key=value config file; flags override its values");
    sub->add_option("--out", config.out, "output directory for stage artifacts");
}

}  // namespace

int main(int argc, char** argv) {
    mstopics::RunConfig config;
    std::string config_path = find_config_arg(argc, argv);

    CLI::App app{"multiscale topic clustering over document embedding graphs"};
    app.require_subcommand(1);

    try {
        if (!config_path.empty()) config = mstopics::load_config_file(config_path, config);

        auto* build = app.add_subcommand("build-graph",
                                         "build the MST-kNN similarity graph from embeddings");
        add_common(build, config, config_path);
        build->add_option("--embeddings", config.embeddings, "document vectors, tsv or csv");
        build->add_option("--graph", config.graph, "graph output path (default <out>/graph.tsv)");
        build->add_option("--k", config.k, "neighbors per node on top of the spanning tree");
        build->add_option("--seed", config.master_seed, "seed recorded in artifact metadata");
        build->callback([&] {
            mstopics::apply_workers(config);
            mstopics::cmd_build_graph(config);
        });

        auto* scan = app.add_subcommand("scan", "optimize partitions across the Markov time grid");
        add_common(scan, config, config_path);
        scan->add_option("--graph", config.graph, "graph artifact (default <out>/graph.tsv)");
        scan->add_option("--t-min", config.t_min, "first Markov time");
        scan->add_option("--t-max", config.t_max, "last Markov time");
        scan->add_option("--t-step", config.t_step, "linear grid spacing");
        scan->add_option("--t-points", config.t_points, "log grid point count");
        scan->add_flag("--log-grid", config.log_grid, "log-spaced grid instead of linear");
        scan->add_option("--n-runs", config.n_runs, "optimizer restarts per time point");
        scan->add_option("--n-top", config.n_top, "top runs kept for the dispersion estimate");
        scan->add_option("--seed", config.master_seed, "master seed for the restart ensemble");
        scan->add_option("--workers", config.workers, "thread cap, 0 keeps the runtime default");
        scan->callback([&] {
            mstopics::apply_workers(config);
            mstopics::cmd_scan(config);
        });

        auto* select = app.add_subcommand("select", "detect robust scales in a finished scan");
        add_common(select, config, config_path);
        select->add_option("--plateau-threshold", config.plateau_threshold,
                           "cross-time dispersion bound, negative for auto");
        select->add_option("--min-plateau-len", config.min_plateau_len,
                           "grid points a plateau must span");
        select->add_option("--dip-window", config.dip_window, "window for the dip depth");
        select->callback([&] { mstopics::cmd_select(config); });

        auto* evaluate = app.add_subcommand("evaluate",
                                            "score robust scales against external labels");
        add_common(evaluate, config, config_path);
        evaluate->add_option("--labels", config.labels, "label files, one per category level");
        evaluate->add_option("--embeddings", config.embeddings,
                             "original vectors, enables the centroid baseline");
        evaluate->add_option("--n-nearest", config.n_nearest,
                             "neighbors per category in the centroid baseline");
        evaluate->add_flag("--force", config.force, "accept provenance-mismatched artifacts");
        evaluate->callback([&] { mstopics::cmd_evaluate(config); });

        auto* summarize = app.add_subcommand("summarize",
                                             "rank characteristic terms per cluster");
        add_common(summarize, config, config_path);
        summarize->add_option("--corpus", config.corpus, "id<TAB>text file or document directory");
        summarize->add_option("--stopwords", config.stopwords, "one stop-word per line");
        summarize->add_option("--lemmas", config.lemmas, "token<TAB>lemma table");
        summarize->add_option("--top-n", config.top_n, "terms kept per cluster");
        summarize->add_option("--scale", config.scale,
                              "robust scale index, -1 summarizes all of them");
        summarize->add_flag("--force", config.force, "accept provenance-mismatched artifacts");
        summarize->callback([&] { mstopics::cmd_summarize(config); });

        auto* bench = app.add_subcommand("bench", "generate synthetic benchmark inputs");
        bench->require_subcommand(1);
        std::string bench_out = "bench";
        std::uint64_t bench_seed = 0;

        auto* two_level = bench->add_subcommand("two-level",
                                                "planted two-level block-model graph");
        mstopics::TwoLevelParams params;
        two_level->add_option("--out", bench_out, "output directory");
        two_level->add_option("--seed", bench_seed, "generator seed");
        two_level->add_option("--blocks", params.n_blocks, "fine block count");
        two_level->add_option("--block-size", params.block_size, "nodes per block");
        two_level->add_option("--supers", params.n_super, "super-block count");
        two_level->add_option("--p-in", params.p_in, "intra-block edge probability");
        two_level->add_option("--p-mid", params.p_mid, "intra-super edge probability");
        two_level->add_option("--p-out", params.p_out, "inter-super edge probability");
        two_level->callback([&] { mstopics::cmd_bench_two_level(params, bench_seed, bench_out); });

        auto* corpus = bench->add_subcommand("corpus",
                                             "hierarchical embeddings, labels and text");
        int n_docs = 3229, dim = 300, n_coarse = 4, fine_per_coarse = 8;
        corpus->add_option("--out", bench_out, "output directory");
        corpus->add_option("--seed", bench_seed, "generator seed");
        corpus->add_option("--docs", n_docs, "document count");
        corpus->add_option("--dim", dim, "embedding dimension");
        corpus->add_option("--areas", n_coarse, "coarse category count");
        corpus->add_option("--topics-per-area", fine_per_coarse, "fine topics per coarse area");
        corpus->callback([&] {
            mstopics::cmd_bench_corpus(n_docs, dim, n_coarse, fine_per_coarse, bench_seed,
                                       bench_out);
        });

        auto* random = bench->add_subcommand("random", "unstructured gaussian embeddings");
        int n = 200, rdim = 16;
        random->add_option("--out", bench_out, "output directory");
        random->add_option("--seed", bench_seed, "generator seed");
        random->add_option("--n", n, "document count");
        random->add_option("--dim", rdim, "embedding dimension");
        random->callback([&] { mstopics::cmd_bench_random(n, rdim, bench_seed, bench_out); });

        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const mstopics::MissingArtifactError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const mstopics::NumericalError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    } catch (const mstopics::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
