#include "mstopics/partition_metrics.hpp"

#include "mstopics/errors.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace mstopics {

namespace {

// Sparse joint counts keyed by community pair. Dense tables blow up when
// partitions approach singletons.
std::unordered_map<std::uint64_t, int> joint_counts(const Partition& a, const Partition& b) {
    std::unordered_map<std::uint64_t, int> counts;
    counts.reserve(a.membership.size());
    for (std::size_t i = 0; i < a.membership.size(); ++i) {
        const auto key = (static_cast<std::uint64_t>(a.membership[i]) << 32) |
                         static_cast<std::uint32_t>(b.membership[i]);
        ++counts[key];
    }
    return counts;
}

std::vector<int> community_sizes(const Partition& p) {
    std::vector<int> sizes(p.n_communities, 0);
    for (int c : p.membership) ++sizes[c];
    return sizes;
}

}  // namespace

AlignedLabels align_labels(const LabelSet& labels, const Partition& partition,
                           const std::vector<std::string>& ids) {
    if (static_cast<int>(ids.size()) != partition.size()) {
        throw ValidationError("align_labels: id list and partition disagree on N");
    }

    AlignedLabels aligned;
    std::unordered_map<std::string, int> category_index;
    for (std::size_t row = 0; row < ids.size(); ++row) {
        const auto it = labels.assignments.find(ids[row]);
        if (it == labels.assignments.end()) continue;
        aligned.doc_rows.push_back(static_cast<int>(row));
        aligned.community_of.push_back(partition.membership[row]);
        aligned.label_of.push_back(-1);  // patched after categories are sorted
        category_index.try_emplace(it->second, 0);
    }
    aligned.coverage = static_cast<int>(aligned.doc_rows.size());
    if (aligned.coverage == 0) throw ValidationError("align_labels: no co-labeled documents");

    for (const auto& [category, idx] : category_index) aligned.categories.push_back(category);
    std::sort(aligned.categories.begin(), aligned.categories.end());
    for (std::size_t i = 0; i < aligned.categories.size(); ++i)
        category_index[aligned.categories[i]] = static_cast<int>(i);
    for (std::size_t i = 0; i < aligned.doc_rows.size(); ++i)
        aligned.label_of[i] = category_index.at(labels.assignments.at(ids[aligned.doc_rows[i]]));
    return aligned;
}

double partition_entropy(const Partition& p) {
    const double n = p.size();
    double h = 0.0;
    for (int size : community_sizes(p)) {
        if (size == 0) continue;
        const double prob = size / n;
        h -= prob * std::log(prob);
    }
    return h;
}

double variation_of_information(const Partition& a, const Partition& b, bool normalized) {
    if (a.size() != b.size()) throw ValidationError("variation_of_information: partition sizes differ");
    const int n = a.size();
    if (n == 0) throw ValidationError("variation_of_information: empty partitions");

    const auto sizes_a = community_sizes(a);
    const auto sizes_b = community_sizes(b);

    // VI = sum_jk p_jk log( p_j p_k / p_jk^2 ). Every term is >= 0 because
    // p_jk <= min(p_j, p_k), and identical partitions give exactly 0.
    double vi = 0.0;
    for (const auto& [key, count] : joint_counts(a, b)) {
        const int ca = static_cast<int>(key >> 32);
        const int cb = static_cast<int>(key & 0xffffffffu);
        const double p_jk = static_cast<double>(count) / n;
        const double p_j = static_cast<double>(sizes_a[ca]) / n;
        const double p_k = static_cast<double>(sizes_b[cb]) / n;
        vi += p_jk * std::log((p_j * p_k) / (p_jk * p_jk));
    }
    if (normalized) vi /= std::log(static_cast<double>(n));
    return vi;
}

double ensemble_vi(const std::vector<Partition>& partitions) {
    const int m = static_cast<int>(partitions.size());
    if (m < 2) throw ValidationError("ensemble_vi needs at least 2 partitions");
    double total = 0.0;
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) total += variation_of_information(partitions[i], partitions[j]);
    return total / (0.5 * m * (m - 1));
}

CrossTimeVI cross_time_vi(const std::vector<Partition>& best_per_time,
                          const std::vector<double>& t_grid) {
    if (best_per_time.size() != t_grid.size()) {
        throw ValidationError("cross_time_vi: grid and partition counts differ");
    }
    if (t_grid.size() < 2) throw ValidationError("cross_time_vi needs at least 2 times");

    const int m = static_cast<int>(t_grid.size());
    CrossTimeVI out;
    out.t_grid = t_grid;
    out.matrix = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
            const double vi = variation_of_information(best_per_time[i], best_per_time[j]);
            out.matrix(i, j) = vi;
            out.matrix(j, i) = vi;
        }
    }
    return out;
}

double uncertainty_coefficient(const AlignedLabels& aligned) {
    if (aligned.categories.size() < 2) {
        throw ValidationError("uncertainty_coefficient: needs >= 2 categories in the overlap");
    }
    const int n = aligned.coverage;
    const int n_cat = static_cast<int>(aligned.categories.size());

    std::vector<int> row_sums(n_cat, 0);
    std::unordered_map<int, int> col_sums;
    std::unordered_map<std::uint64_t, int> cells;
    for (int i = 0; i < n; ++i) {
        ++row_sums[aligned.label_of[i]];
        ++col_sums[aligned.community_of[i]];
        const auto key = (static_cast<std::uint64_t>(aligned.label_of[i]) << 32) |
                         static_cast<std::uint32_t>(aligned.community_of[i]);
        ++cells[key];
    }

    double h_t = 0.0;
    for (int r : row_sums) {
        if (r == 0) continue;
        const double p = static_cast<double>(r) / n;
        h_t -= p * std::log(p);
    }
    double mi = 0.0;
    for (const auto& [key, count] : cells) {
        const int r = static_cast<int>(key >> 32);
        const int c = static_cast<int>(key & 0xffffffffu);
        const double p_rc = static_cast<double>(count) / n;
        const double p_r = static_cast<double>(row_sums[r]) / n;
        const double p_c = static_cast<double>(col_sums.at(c)) / n;
        mi += p_rc * std::log(p_rc / (p_r * p_c));
    }
    double u = mi / h_t;
    // Clip the floating-point fuzz at the boundaries; I <= H(T) holds exactly.
    return std::clamp(u, 0.0, 1.0);
}

double uncertainty_coefficient(const LabelSet& labels, const Partition& partition,
                               const std::vector<std::string>& ids) {
    return uncertainty_coefficient(align_labels(labels, partition, ids));
}

ContingencyTable contingency_with_zscores(const AlignedLabels& aligned) {
    const int n = aligned.coverage;
    const int n_rows = static_cast<int>(aligned.categories.size());

    std::vector<int> clusters = aligned.community_of;
    std::sort(clusters.begin(), clusters.end());
    clusters.erase(std::unique(clusters.begin(), clusters.end()), clusters.end());
    const int n_cols = static_cast<int>(clusters.size());
    std::unordered_map<int, int> col_index;
    for (int j = 0; j < n_cols; ++j) col_index[clusters[j]] = j;

    ContingencyTable table;
    table.row_names = aligned.categories;
    table.col_clusters = clusters;
    table.coverage = n;
    table.counts = Eigen::MatrixXi::Zero(n_rows, n_cols);
    for (int i = 0; i < n; ++i) {
        ++table.counts(aligned.label_of[i], col_index.at(aligned.community_of[i]));
    }

    const Eigen::VectorXd row_sums = table.counts.cast<double>().rowwise().sum();
    const Eigen::VectorXd col_sums = table.counts.cast<double>().colwise().sum();
    table.z_scores = Eigen::MatrixXd::Zero(n_rows, n_cols);
    for (int i = 0; i < n_rows; ++i) {
        for (int j = 0; j < n_cols; ++j) {
            const double expected = row_sums(i) * col_sums(j) / n;
            const double variance =
                expected * (1.0 - row_sums(i) / n) * (1.0 - col_sums(j) / n);
            if (variance > 0.0) {
                table.z_scores(i, j) = (table.counts(i, j) - expected) / std::sqrt(variance);
            }
        }
    }
    return table;
}

ContingencyTable contingency_with_zscores(const LabelSet& labels, const Partition& partition,
                                          const std::vector<std::string>& ids) {
    return contingency_with_zscores(align_labels(labels, partition, ids));
}

int centroid_benchmark(const EmbeddingMatrix& embeddings, const LabelSet& labels, int n_nearest) {
    validate_labels(labels, embeddings);
    if (n_nearest < 1 || n_nearest > embeddings.n()) {
        throw ValidationError("centroid_benchmark: n_nearest out of range");
    }

    std::unordered_map<std::string, int> row_of;
    for (int i = 0; i < embeddings.n(); ++i) row_of[embeddings.ids[i]] = i;

    const auto categories = labels.categories();
    std::unordered_map<std::string, std::vector<int>> members;
    std::vector<int> labeled_rows;
    std::vector<int> label_index(embeddings.n(), -1);
    std::unordered_map<std::string, int> cat_index;
    for (std::size_t c = 0; c < categories.size(); ++c) cat_index[categories[c]] = static_cast<int>(c);
    for (const auto& [id, category] : labels.assignments) {
        const int row = row_of.at(id);
        members[category].push_back(row);
        labeled_rows.push_back(row);
        label_index[row] = cat_index.at(category);
    }
    std::sort(labeled_rows.begin(), labeled_rows.end());
    if (n_nearest > static_cast<int>(labeled_rows.size())) {
        throw ValidationError("centroid_benchmark: n_nearest exceeds the labeled document count");
    }

    // Unit rows once, so centroid similarity is a single matrix-vector product.
    Eigen::MatrixXd unit = embeddings.vectors;
    for (int i = 0; i < unit.rows(); ++i) unit.row(i).normalize();

    int score = 0;
    for (const auto& category : categories) {
        const auto& rows = members.at(category);
        if (rows.empty()) throw ValidationError("centroid_benchmark: empty category " + category);
        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(embeddings.dim());
        for (int row : rows) centroid += embeddings.vectors.row(row);
        centroid /= static_cast<double>(rows.size());
        const double norm = centroid.norm();
        if (norm == 0.0) {
            throw ValidationError("centroid_benchmark: zero centroid for category " + category);
        }
        centroid /= norm;

        const Eigen::VectorXd sims = unit * centroid;
        std::vector<int> order = labeled_rows;
        const auto better = [&](int a, int b) {
            if (sims(a) != sims(b)) return sims(a) > sims(b);
            return a < b;
        };
        std::nth_element(order.begin(), order.begin() + (n_nearest - 1), order.end(), better);
        for (int m = 0; m < n_nearest; ++m) {
            if (label_index[order[m]] == cat_index.at(category)) ++score;
        }
    }
    return score;
}

}  // namespace mstopics
