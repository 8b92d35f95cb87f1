#pragma once

#include "mstopics/partition.hpp"
#include "mstopics/partition_metrics.hpp"
#include "mstopics/similarity_graph.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <vector>

namespace mstopics {

// Random-walk diffusion pieces for one graph, plus the spectral factorization
// of the symmetrized Laplacian. The eigendecomposition is done once and reused
// for every Markov time, which is what makes dense time scans affordable.
struct DiffusionOperators {
    Eigen::MatrixXd laplacian;      // L = I - D^{-1} A
    Eigen::VectorXd pi;             // stationary distribution, strength / (2 total weight)
    Eigen::VectorXd sqrt_strength;  // s_i = sqrt(strength_i)
    double total_strength = 0.0;    // sum of strengths = 2 * total edge weight
    Eigen::VectorXd eigenvalues;    // of L_sym = I - S^{-1} A S^{-1}
    Eigen::MatrixXd eigenvectors;   // columns, orthonormal

    int n() const { return static_cast<int>(pi.size()); }
};

// R_base(t) = Pi exp(-tL) - pi pi^T. Symmetric with zero row/column sums.
struct StabilityMatrix {
    double t = 0.0;
    Eigen::MatrixXd values;
};

struct LouvainResult {
    Partition partition;
    double r = 0.0;
};

struct ScanRecord {
    double t = 0.0;
    Partition best;             // highest-r partition of the ensemble
    double stability = 0.0;     // its r value
    int n_communities = 0;
    double ensemble_vi = 0.0;   // mean pairwise VI over the top partitions
};

struct StabilityScan {
    std::vector<ScanRecord> records;
    CrossTimeVI cross_vi;  // VI between best partitions across the grid
};

struct ScanOptions {
    int n_runs = 500;
    int n_top = 50;
    std::uint64_t master_seed = 0;
};

// Entries of exp(-tL) more negative than this raise NumericalError; anything
// between it and zero is rounding noise and is clamped to zero.
inline constexpr double kKernelTolerance = 1e-10;

DiffusionOperators diffusion_operators(const SparseGraph& graph);

// exp(-tL) computed as S^{-1} U exp(-t lambda) U^T S. Rows sum to 1.
Eigen::MatrixXd diffusion_kernel(const DiffusionOperators& ops, double t);

StabilityMatrix stability_matrix(const DiffusionOperators& ops, double t);

// r(t,H): sum of R_base over same-community pairs, i.e. trace[H^T R_base H].
double stability_score(const StabilityMatrix& base, const Partition& partition);

// Two-phase Louvain over the dense signed quality matrix. Node visit order is
// a seeded shuffle; only strictly positive gains are applied, so the score
// never decreases. Deterministic for a fixed seed.
LouvainResult louvain_optimize(const StabilityMatrix& base, std::uint64_t seed);

std::vector<double> log_time_grid(double t_min, double t_max, int n_points);
std::vector<double> linear_time_grid(double t_min, double t_max, double step);

StabilityScan scan_markov_times(const SparseGraph& graph, const std::vector<double>& t_grid,
                                const ScanOptions& options);

}  // namespace mstopics
