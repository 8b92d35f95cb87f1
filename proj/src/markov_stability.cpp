#include "mstopics/markov_stability.hpp"

#include "mstopics/errors.hpp"
#include "mstopics/rng.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mstopics {

namespace {

// U exp(-t lambda) U^T assembled as G = B B^T with B = U exp(-t lambda / 2).
// The rank update fills one triangle, so mirroring keeps G exactly symmetric,
// and the factored form halves the multiply cost against the naive triple
// product.
Eigen::MatrixXd symmetric_heat_kernel(const DiffusionOperators& ops, double t) {
    const int n = ops.n();
    Eigen::MatrixXd scaled = ops.eigenvectors;
    for (int j = 0; j < n; ++j) {
        scaled.col(j) *= std::exp(-0.5 * t * ops.eigenvalues(j));
    }
    Eigen::MatrixXd kernel = Eigen::MatrixXd::Zero(n, n);
    kernel.selfadjointView<Eigen::Lower>().rankUpdate(scaled);
    kernel.triangularView<Eigen::StrictlyUpper>() =
        kernel.triangularView<Eigen::StrictlyLower>().transpose();

    // Negative entries of exp(-tL) beyond rounding noise mean the spectral
    // route lost accuracy. The random-walk entry at (i,j) is (s_j/s_i) G_ij;
    // noise-level negatives are clamped to zero, which keeps G symmetric
    // because the mirrored entry is negative exactly when this one is.
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            if (kernel(i, j) < 0.0) {
                const double rw = kernel(i, j) * ops.sqrt_strength(j) / ops.sqrt_strength(i);
                if (rw < -kKernelTolerance) {
                    throw NumericalError("diffusion kernel entry " + std::to_string(rw) +
                                         " below tolerance at t=" + std::to_string(t));
                }
                kernel(i, j) = 0.0;
            }
        }
    }
    return kernel;
}

}  // namespace

DiffusionOperators diffusion_operators(const SparseGraph& graph) {
    if (graph.n < 2) throw ValidationError("diffusion_operators: graph too small");
    if (!is_connected(graph)) throw ValidationError("diffusion_operators: graph is disconnected");

    const Eigen::MatrixXd adjacency = graph.adjacency();
    const Eigen::VectorXd strength = graph.strengths();
    if (strength.minCoeff() <= 0.0) {
        throw ValidationError("diffusion_operators: node with nonpositive strength");
    }

    DiffusionOperators ops;
    ops.total_strength = strength.sum();
    ops.pi = strength / ops.total_strength;
    ops.sqrt_strength = strength.cwiseSqrt();

    const int n = graph.n;
    ops.laplacian = Eigen::MatrixXd::Identity(n, n) -
                    strength.cwiseInverse().asDiagonal() * adjacency;

    // L_sym = I - S^{-1} A S^{-1}, filled so that (i,j) and (j,i) are the
    // same floating-point product, then decomposed once.
    Eigen::MatrixXd l_sym = Eigen::MatrixXd::Identity(n, n);
    const Eigen::VectorXd inv_s = ops.sqrt_strength.cwiseInverse();
    for (int j = 0; j < n; ++j) {
        for (int i = j; i < n; ++i) {
            const double value = adjacency(i, j) * (inv_s(i) * inv_s(j));
            l_sym(i, j) -= value;
            if (i != j) l_sym(j, i) = l_sym(i, j);
        }
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(l_sym);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("diffusion_operators: eigendecomposition failed");
    }
    ops.eigenvalues = solver.eigenvalues();
    ops.eigenvectors = solver.eigenvectors();
    return ops;
}

Eigen::MatrixXd diffusion_kernel(const DiffusionOperators& ops, double t) {
    if (t < 0.0) throw ValidationError("diffusion_kernel: negative Markov time");
    const int n = ops.n();
    if (t == 0.0) return Eigen::MatrixXd::Identity(n, n);

    const Eigen::MatrixXd sym = symmetric_heat_kernel(ops, t);
    const Eigen::VectorXd inv_s = ops.sqrt_strength.cwiseInverse();
    Eigen::MatrixXd kernel(n, n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            kernel(i, j) = sym(i, j) * ops.sqrt_strength(j) * inv_s(i);
        }
    }
    return kernel;
}

StabilityMatrix stability_matrix(const DiffusionOperators& ops, double t) {
    if (t < 0.0) throw ValidationError("stability_matrix: negative Markov time");
    const int n = ops.n();

    StabilityMatrix base;
    base.t = t;
    if (t == 0.0) {
        // Pi I - pi pi^T, no kernel needed.
        base.values = -ops.pi * ops.pi.transpose();
        base.values.diagonal() += ops.pi;
        return base;
    }

    // Pi exp(-tL) has entries s_i s_j G_ij / (2w), symmetric by construction
    // since every factor is commutative in (i,j).
    const Eigen::MatrixXd sym = symmetric_heat_kernel(ops, t);
    const double inv_total = 1.0 / ops.total_strength;
    base.values.resize(n, n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const double scale = ops.sqrt_strength(i) * ops.sqrt_strength(j);
            base.values(i, j) = sym(i, j) * scale * inv_total - ops.pi(i) * ops.pi(j);
        }
    }
    return base;
}

double stability_score(const StabilityMatrix& base, const Partition& partition) {
    const int n = static_cast<int>(base.values.rows());
    if (partition.size() != n) throw ValidationError("stability_score: partition size mismatch");

    double r = 0.0;
    for (const auto& group : partition.groups()) {
        for (int i : group) {
            for (int j : group) r += base.values(i, j);
        }
    }
    return r;
}

LouvainResult louvain_optimize(const StabilityMatrix& base, std::uint64_t seed) {
    const int n_nodes = static_cast<int>(base.values.rows());
    SplitMix64 rng(seed);

    // flat[v] = community of original node v in terms of the current level's
    // super-nodes. Levels repeat move/aggregate until nothing merges. Level 1
    // reads base.values in place; only the aggregated levels own storage.
    std::vector<int> flat(n_nodes);
    std::iota(flat.begin(), flat.end(), 0);

    const Eigen::MatrixXd* quality = &base.values;
    Eigen::MatrixXd owned;
    constexpr int kMaxSweeps = 100;

    while (true) {
        const Eigen::MatrixXd& q = *quality;
        const int n = static_cast<int>(q.rows());
        std::vector<int> community(n);
        std::iota(community.begin(), community.end(), 0);

        std::vector<int> order(n);
        std::iota(order.begin(), order.end(), 0);
        shuffle(order, rng);

        // Affinity entries are reset lazily via the stamp array, so a node
        // visit costs one row scan instead of a row scan plus a full clear.
        std::vector<double> affinity(n, 0.0);
        std::vector<int> stamp(n, -1);
        std::vector<int> touched;
        touched.reserve(n);
        int visit = 0;

        bool any_move = false;
        for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
            bool moved = false;
            for (int node : order) {
                const int home = community[node];
                ++visit;
                touched.clear();
                // Column `node` of the column-major matrix; equals the row
                // because every level's quality matrix is exactly symmetric.
                const double* column = q.data() + static_cast<std::ptrdiff_t>(node) * n;
                for (int j = 0; j < n; ++j) {
                    if (j == node) continue;
                    const int c = community[j];
                    if (stamp[c] != visit) {
                        stamp[c] = visit;
                        affinity[c] = 0.0;
                        touched.push_back(c);
                    }
                    affinity[c] += column[j];
                }
                if (stamp[home] != visit) {
                    stamp[home] = visit;
                    affinity[home] = 0.0;
                }

                // Candidates: every occupied community, plus one empty slot
                // (affinity 0), which a node with negative ties prefers.
                const double home_affinity = affinity[home];
                int best = home;
                double best_gain = 0.0;
                for (int c : touched) {
                    if (c == home) continue;
                    const double gain = 2.0 * (affinity[c] - home_affinity);
                    if (gain > best_gain || (gain == best_gain && best != home && c < best)) {
                        best_gain = gain;
                        best = c;
                    }
                }
                if (-2.0 * home_affinity > best_gain) {
                    // Fresh singleton community: reuse any index no other node
                    // holds; the canonical relabeling later absorbs the gap.
                    int spare = community[node];
                    bool taken = false;
                    for (int j = 0; j < n && !taken; ++j) {
                        taken = j != node && community[j] == spare;
                    }
                    if (taken) {
                        std::vector<char> used(n, 0);
                        for (int j = 0; j < n; ++j) {
                            if (j != node) used[community[j]] = 1;
                        }
                        spare = 0;
                        while (used[spare]) ++spare;
                    }
                    best = spare;
                    best_gain = -2.0 * home_affinity;
                }
                if (best != home && best_gain > 0.0) {
                    community[node] = best;
                    moved = true;
                    any_move = true;
                }
            }
            if (!moved) break;
        }

        const Partition level = Partition::from_labels(community);
        if (!any_move || level.n_communities == n) break;

        for (int v = 0; v < n_nodes; ++v) flat[v] = level.membership[flat[v]];

        // Aggregate community blocks into the next level's quality matrix.
        // Accumulation order differs between (a,b) and (b,a), so mirror the
        // lower triangle to keep the matrix exactly symmetric.
        const int c = level.n_communities;
        Eigen::MatrixXd next = Eigen::MatrixXd::Zero(c, c);
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i < n; ++i) {
                next(level.membership[i], level.membership[j]) += q(i, j);
            }
        }
        next.triangularView<Eigen::StrictlyUpper>() =
            next.triangularView<Eigen::StrictlyLower>().transpose();
        owned = std::move(next);
        quality = &owned;
        if (c == 1) break;
    }

    LouvainResult result;
    result.partition = Partition::from_labels(flat);
    result.r = stability_score(base, result.partition);

    // The ensemble contract promises at least the better trivial partition.
    // Louvain starts from singletons, so only all-in-one can still win.
    if (result.partition.n_communities > 1) {
        const Partition merged = Partition::all_in_one(n_nodes);
        const double merged_r = stability_score(base, merged);
        if (merged_r > result.r) {
            result.partition = merged;
            result.r = merged_r;
        }
    }
    return result;
}

std::vector<double> log_time_grid(double t_min, double t_max, int n_points) {
    if (t_min <= 0.0 || t_max <= t_min) throw ValidationError("log_time_grid: need 0 < t_min < t_max");
    if (n_points < 2) throw ValidationError("log_time_grid: need at least 2 points");
    std::vector<double> grid(n_points);
    const double ratio = std::log(t_max / t_min);
    for (int i = 0; i < n_points; ++i) {
        grid[i] = t_min * std::exp(ratio * i / (n_points - 1));
    }
    grid.front() = t_min;
    grid.back() = t_max;
    return grid;
}

std::vector<double> linear_time_grid(double t_min, double t_max, double step) {
    if (step <= 0.0 || t_max <= t_min) {
        throw ValidationError("linear_time_grid: need a positive step and t_min < t_max");
    }
    std::vector<double> grid;
    const int count = static_cast<int>(std::floor((t_max - t_min) / step + 0.5)) + 1;
    for (int i = 0; i < count; ++i) {
        const double t = t_min + step * i;
        if (t > t_max + step * 1e-9) break;
        grid.push_back(t);
    }
    return grid;
}

StabilityScan scan_markov_times(const SparseGraph& graph, const std::vector<double>& t_grid,
                                const ScanOptions& options) {
    if (t_grid.empty()) throw ValidationError("scan_markov_times: empty time grid");
    if (!std::is_sorted(t_grid.begin(), t_grid.end())) {
        throw ValidationError("scan_markov_times: time grid must be sorted ascending");
    }
    if (options.n_runs < 1) throw ValidationError("scan_markov_times: n_runs must be positive");
    if (options.n_top < 2 || options.n_top > options.n_runs) {
        throw ValidationError("scan_markov_times: need 2 <= n_top <= n_runs");
    }
    for (double t : t_grid) {
        if (t < 0.0) throw ValidationError("scan_markov_times: negative Markov time");
    }

    const auto ops = diffusion_operators(graph);

    StabilityScan scan;
    scan.records.reserve(t_grid.size());
    std::vector<Partition> best_partitions;
    best_partitions.reserve(t_grid.size());

    std::vector<LouvainResult> runs(options.n_runs);
    for (std::size_t ti = 0; ti < t_grid.size(); ++ti) {
        const StabilityMatrix base = stability_matrix(ops, t_grid[ti]);

#pragma omp parallel for schedule(dynamic)
        for (int run = 0; run < options.n_runs; ++run) {
            runs[run] = louvain_optimize(
                base, derive_seed(options.master_seed, static_cast<std::uint64_t>(ti),
                                  static_cast<std::uint64_t>(run)));
        }

        // Rank by r descending, then run index, so the selection is a
        // deterministic reduction no matter how the runs were scheduled.
        std::vector<int> ranked(options.n_runs);
        std::iota(ranked.begin(), ranked.end(), 0);
        std::sort(ranked.begin(), ranked.end(), [&](int a, int b) {
            if (runs[a].r != runs[b].r) return runs[a].r > runs[b].r;
            return a < b;
        });

        std::vector<Partition> top;
        top.reserve(options.n_top);
        for (int m = 0; m < options.n_top; ++m) top.push_back(runs[ranked[m]].partition);

        ScanRecord record;
        record.t = t_grid[ti];
        record.best = runs[ranked[0]].partition;
        record.stability = runs[ranked[0]].r;
        record.n_communities = record.best.n_communities;
        record.ensemble_vi = ensemble_vi(top);
        best_partitions.push_back(record.best);
        scan.records.push_back(std::move(record));
    }

    if (t_grid.size() >= 2) {
        scan.cross_vi = cross_time_vi(best_partitions, t_grid);
    } else {
        scan.cross_vi.t_grid = t_grid;
        scan.cross_vi.matrix = Eigen::MatrixXd::Zero(1, 1);
    }
    return scan;
}

}  // namespace mstopics
