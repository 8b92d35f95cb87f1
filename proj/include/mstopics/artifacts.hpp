#pragma once

#include "mstopics/markov_stability.hpp"
#include "mstopics/partition_metrics.hpp"
#include "mstopics/scale_selection.hpp"
#include "mstopics/similarity_graph.hpp"
#include "mstopics/topic_summary.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace mstopics {

std::uint64_t fnv1a(std::string_view bytes);
std::uint64_t fnv1a_file(const std::filesystem::path& path);
std::string hash_hex(std::uint64_t value);

// Sidecar convention: graph.tsv sits next to graph.meta.json.
std::filesystem::path meta_path(const std::filesystem::path& artifact);

// Provenance carried by every artifact. config_hash identifies the producing
// configuration; upstream_hash is the config_hash of the artifact this one was
// derived from (empty at pipeline roots). The worker count never enters here,
// so artifacts are comparable across thread counts.
struct ArtifactMeta {
    std::string stage;
    std::string config_hash;
    std::string upstream_hash;
    std::uint64_t master_seed = 0;
    nlohmann::json extra = nlohmann::json::object();
};

void write_meta(const std::filesystem::path& artifact, const ArtifactMeta& meta);
ArtifactMeta read_meta(const std::filesystem::path& artifact);

// Consumers verify that a derived input was produced from the parent they are
// about to combine it with. `force` downgrades a mismatch to acceptance.
void require_chain(const ArtifactMeta& child, const ArtifactMeta& parent, bool force);

struct GraphArtifact {
    SparseGraph graph;
    std::vector<std::string> ids;
    ArtifactMeta meta;
};

void write_graph(const std::filesystem::path& path, const SparseGraph& graph,
                 const std::vector<std::string>& ids, const ArtifactMeta& meta);
GraphArtifact read_graph(const std::filesystem::path& path);

// Scan artifacts live in a directory: scan.tsv (one record per Markov time),
// cross_vi.tsv (the VI(t,t') matrix) and partitions/tNNNN.tsv files.
struct ScanArtifact {
    StabilityScan scan;
    std::vector<std::string> ids;
    ArtifactMeta meta;
};

void write_scan(const std::filesystem::path& dir, const StabilityScan& scan,
                const std::vector<std::string>& ids, const ArtifactMeta& meta);
ScanArtifact read_scan(const std::filesystem::path& dir);

struct ScalesArtifact {
    std::vector<RobustScale> scales;
    std::vector<std::string> ids;
    ArtifactMeta meta;
};

void write_scales(const std::filesystem::path& dir, const std::vector<RobustScale>& scales,
                  const std::vector<std::string>& ids, const ArtifactMeta& meta);
ScalesArtifact read_scales(const std::filesystem::path& dir);

void write_partition_flows(const std::filesystem::path& path,
                           const std::vector<PartitionFlow>& flows, const ArtifactMeta& meta);
void write_label_flows(const std::filesystem::path& path, const std::vector<LabelFlow>& flows,
                       const ArtifactMeta& meta);

// Writes base.counts.tsv and base.zscores.tsv with category rows and cluster
// columns, plus a sidecar recording coverage and the z-score definition.
void write_contingency(const std::filesystem::path& base, const ContingencyTable& table,
                       const ArtifactMeta& meta);

struct ScaleLabelMetrics {
    int scale = 0;
    double t_star = 0.0;
    int n_communities = 0;
    std::string label;
    int categories = 0;
    int coverage = 0;
    double u = 0.0;
    double vi = 0.0;
    double vi_normalized = 0.0;
};

void write_metrics(const std::filesystem::path& path, const std::vector<ScaleLabelMetrics>& rows,
                   const ArtifactMeta& meta);

struct CentroidBenchmarkRow {
    std::string label;
    int categories = 0;
    int n_nearest = 0;
    int score = 0;
    int max_score = 0;
};

void write_centroid_benchmark(const std::filesystem::path& path,
                              const std::vector<CentroidBenchmarkRow>& rows,
                              const ArtifactMeta& meta);

// One lemma<TAB>weight file per cluster inside dir.
void write_cluster_summaries(const std::filesystem::path& dir,
                             const std::vector<ClusterSummary>& summaries,
                             const ArtifactMeta& meta);

}  // namespace mstopics
