#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "oscent/fockspace.hpp"
#include "oscent/model.hpp"

namespace oscent {

/// Truncation and solver settings for the numerical cross-checks.
///
/// Each particle gets the first `basis_dim` Hermite functions h^(n)(s xi) of a
/// dilated coordinate. `basis_scale` = 0 selects s^4 = geometric mean of the
/// normal-mode stiffnesses of the block being discretized: 1 + (N - m)R for
/// its centre of mass and 1 + N R for its m - 1 relative modes.
struct TruncatedBasisConfig {
  int basis_dim = 20;
  double tolerance = 1e-10;
  /// Lanczos restart limit.
  int max_iterations = 500;
  /// Sweep limit of the alternating separability iteration.
  int max_sweeps = 5000;
  int restarts = 8;
  double basis_scale = 0.0;
  std::uint64_t seed = 0x5eed'0f'0a11ULL;
  /// Largest matrix dimension any solver may build.
  std::int64_t max_rows = 20'000;

  void validate() const;
};

double resolved_basis_scale(const EnsembleSpec& spec, const TruncatedBasisConfig& config, std::int64_t block_size);
double resolved_basis_scale(const EnsembleSpec& spec, const TruncatedBasisConfig& config);

/// Potential of the rescaled Hamiltonian, (1/2) xi^T A xi with
/// A = (1 + N R) Id - R n n^T and n = (1, ..., 1).
struct QuadraticForm {
  Eigen::MatrixXd coefficients;

  static QuadraticForm for_ensemble(const EnsembleSpec& spec);

  /// Eigenvalues of A, ascending.
  Eigen::VectorXd stiffnesses() const;
};

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Rescaled Hamiltonian in the product basis, assembled from the exact
/// single-site matrix elements of xi^2, d^2/dxi^2 and xi. The result is the
/// Galerkin projection of the true operator, so its eigenvalues converge from
/// above as basis_dim grows. Throws InvalidArgument if d^N exceeds max_rows.
SparseMatrix build_hamiltonian_matrix(const EnsembleSpec& spec, const TruncatedBasisConfig& config);

struct EigenPair {
  double value = 0.0;
  Eigen::VectorXd vector;
  double residual = 0.0;  // ||A v - value v|| with ||v|| = 1
  int matvecs = 0;
};

/// Lowest eigenpair of a symmetric operator by restarted Lanczos with full
/// reorthogonalization. Throws NumericalFailure when the residual does not
/// fall below `tol` within `max_iterations` restarts.
EigenPair smallest_eigenpair(const SparseMatrix& matrix, double tol = 1e-9, int max_iterations = 500,
                             const Eigen::VectorXd* start = nullptr);
EigenPair smallest_eigenpair(const Eigen::MatrixXd& matrix, double tol = 1e-9, int max_iterations = 500,
                             const Eigen::VectorXd* start = nullptr);

double smallest_eigenvalue(const SparseMatrix& matrix, double tol = 1e-9, int max_iterations = 500);
double smallest_eigenvalue(const Eigen::MatrixXd& matrix, double tol = 1e-9, int max_iterations = 500);

struct SeparabilityRestart {
  double value = 0.0;
  bool converged = false;
  int sweeps = 0;
};

/// Best fixed point of the alternating block iteration.
struct SeparabilityEstimate {
  /// Lowest converged energy over all restarts (an upper bound on the
  /// minimal separability eigenvalue).
  double value = 0.0;
  std::vector<SeparabilityRestart> restarts;
  /// Block states of the best restart, in the truncated product basis.
  std::vector<Eigen::VectorXd> block_states;
  /// ||L_j psi_j - <L_j> psi_j|| / |value| for each block.
  std::vector<double> fixed_point_residuals;
  /// <xi_j^(par)> for each block of the best restart.
  std::vector<double> parallel_means;
};

/// Alternating solution of the separability eigenvalue equations: each block
/// state in turn is replaced by the lowest eigenvector of the Hamiltonian
/// contracted with all other block states. A restart has converged once a
/// sweep changes the energy by less than config.tolerance and every block is
/// an eigenvector of its contracted operator to relative residual
/// config.tolerance. Repeated from config.restarts random product states.
SeparabilityEstimate alternating_separability_solver(const EnsembleSpec& spec, const Partition& partition,
                                                     const TruncatedBasisConfig& config);

struct DistributionMinimum {
  NumberDistribution distribution;
  double value = 0.0;
};

/// Global minimum of sum_N f(N) p_N over distributions on 0..n_max with at
/// most three support points and the given mean. Pairs are solved exactly;
/// for triples the weight of the smallest point runs over a grid of
/// `grid_resolution` steps.
DistributionMinimum brute_force_distribution_min(std::span<const double> per_n_values, double mean,
                                                 int grid_resolution = 20);

}  // namespace oscent
