#include "oscent/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <string>

#include <Eigen/Eigenvalues>

#include "oscent/error.hpp"

namespace oscent {

void TruncatedBasisConfig::validate() const {
  if (basis_dim < 2) throw InvalidArgument("basis dimension must be at least 2");
  if (!(tolerance > 0.0)) throw InvalidArgument("tolerance must be positive");
  if (max_iterations < 1) throw InvalidArgument("iteration limit must be positive");
  if (max_sweeps < 1) throw InvalidArgument("sweep limit must be positive");
  if (restarts < 1) throw InvalidArgument("restart count must be positive");
  if (!(basis_scale >= 0.0) || !std::isfinite(basis_scale)) throw InvalidArgument("basis scale must be nonnegative");
  if (max_rows < 1) throw InvalidArgument("row budget must be positive");
}

double resolved_basis_scale(const EnsembleSpec& spec, const TruncatedBasisConfig& config, std::int64_t block_size) {
  if (config.basis_scale > 0.0) return config.basis_scale;
  if (block_size < 1 || block_size > spec.n_particles()) throw InvalidArgument("block size out of range");
  const double n = static_cast<double>(spec.n_particles());
  const double m = static_cast<double>(block_size);
  const double r = spec.coupling_ratio();
  const double log_stiffness = std::log1p((n - m) * r) + (m - 1.0) * std::log1p(n * r);
  return std::exp(log_stiffness / (4.0 * m));
}

double resolved_basis_scale(const EnsembleSpec& spec, const TruncatedBasisConfig& config) {
  return resolved_basis_scale(spec, config, spec.n_particles());
}

QuadraticForm QuadraticForm::for_ensemble(const EnsembleSpec& spec) {
  const auto n = static_cast<Eigen::Index>(spec.n_particles());
  const double r = spec.coupling_ratio();
  QuadraticForm form;
  form.coefficients = Eigen::MatrixXd::Constant(n, n, -r);
  form.coefficients.diagonal().array() += 1.0 + static_cast<double>(n) * r;
  return form;
}

Eigen::VectorXd QuadraticForm::stiffnesses() const {
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(coefficients, Eigen::EigenvaluesOnly).eigenvalues();
}

namespace {

// Entries of a banded single-site matrix: offsets 0, +-1, +-2.
struct SiteOperator {
  int dim = 0;
  std::vector<double> diag, off1, off2;  // off1[n] = <n|A|n+1>, off2[n] = <n|A|n+2>

  double at(int row, int col) const {
    const int delta = col - row;
    const int low = std::min(row, col);
    if (delta == 0) return diag[static_cast<std::size_t>(row)];
    if (delta == 1 || delta == -1) return off1[static_cast<std::size_t>(low)];
    if (delta == 2 || delta == -2) return off2[static_cast<std::size_t>(low)];
    return 0.0;
  }
};

// Matrix elements in the basis h^(n)(s xi): the operators are written in the
// dilated coordinate y = s xi, for which xi = y/s and d/dxi = s d/dy.
struct SiteOperators {
  SiteOperator local;     // -(1/2) d^2/dxi^2 + (stiffness/2) xi^2
  SiteOperator position;  // xi
};

SiteOperators site_operators(int dim, double scale, double stiffness) {
  SiteOperators ops;
  ops.local.dim = ops.position.dim = dim;
  ops.local.diag.resize(static_cast<std::size_t>(dim));
  ops.local.off1.assign(static_cast<std::size_t>(dim), 0.0);
  ops.local.off2.assign(static_cast<std::size_t>(dim), 0.0);
  ops.position.diag.assign(static_cast<std::size_t>(dim), 0.0);
  ops.position.off1.assign(static_cast<std::size_t>(dim), 0.0);
  ops.position.off2.assign(static_cast<std::size_t>(dim), 0.0);
  const double kinetic = 0.5 * scale * scale;
  const double potential = 0.5 * stiffness / (scale * scale);
  for (int n = 0; n < dim; ++n) {
    const double nd = n;
    // <y^2> and <-d^2/dy^2> share the diagonal n + 1/2 and have opposite
    // second off-diagonals sqrt((n+1)(n+2))/2.
    ops.local.diag[static_cast<std::size_t>(n)] = (kinetic + potential) * (nd + 0.5);
    ops.local.off2[static_cast<std::size_t>(n)] = (potential - kinetic) * 0.5 * std::sqrt((nd + 1.0) * (nd + 2.0));
    ops.position.off1[static_cast<std::size_t>(n)] = std::sqrt((nd + 1.0) / 2.0) / scale;
  }
  return ops;
}

// Sum over `sites` particles of the local operator, plus `pair` * xi_i xi_k
// for every i < k, plus `field` * sum_i xi_i.
SparseMatrix assemble_block(int sites, const SiteOperators& ops, double pair, double field) {
  const int d = ops.local.dim;
  Eigen::Index rows = 1;
  for (int i = 0; i < sites; ++i) rows *= d;
  std::vector<Eigen::Index> stride(static_cast<std::size_t>(sites));
  for (int i = sites - 1, s = 1; i >= 0; --i, s *= d) stride[static_cast<std::size_t>(i)] = s;

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(rows) * static_cast<std::size_t>(3 * sites + 2 * sites * (sites - 1) + 1));
  std::vector<int> digit(static_cast<std::size_t>(sites));
  for (Eigen::Index row = 0; row < rows; ++row) {
    Eigen::Index rest = row;
    for (int i = 0; i < sites; ++i) {
      digit[static_cast<std::size_t>(i)] = static_cast<int>(rest / stride[static_cast<std::size_t>(i)]);
      rest %= stride[static_cast<std::size_t>(i)];
    }
    double diagonal = 0.0;
    for (int i = 0; i < sites; ++i) {
      const int n = digit[static_cast<std::size_t>(i)];
      const auto si = stride[static_cast<std::size_t>(i)];
      diagonal += ops.local.at(n, n);
      for (int delta : {-2, 2}) {
        const int m = n + delta;
        if (m < 0 || m >= d) continue;
        triplets.emplace_back(row, row + delta * si, ops.local.at(n, m));
      }
      if (field != 0.0) {
        for (int delta : {-1, 1}) {
          const int m = n + delta;
          if (m < 0 || m >= d) continue;
          triplets.emplace_back(row, row + delta * si, field * ops.position.at(n, m));
        }
      }
    }
    triplets.emplace_back(row, row, diagonal);
    if (pair == 0.0) continue;
    for (int i = 0; i < sites; ++i) {
      for (int k = i + 1; k < sites; ++k) {
        const int ni = digit[static_cast<std::size_t>(i)];
        const int nk = digit[static_cast<std::size_t>(k)];
        for (int di : {-1, 1}) {
          const int mi = ni + di;
          if (mi < 0 || mi >= d) continue;
          for (int dk : {-1, 1}) {
            const int mk = nk + dk;
            if (mk < 0 || mk >= d) continue;
            const double value = pair * ops.position.at(ni, mi) * ops.position.at(nk, mk);
            triplets.emplace_back(row, row + di * stride[static_cast<std::size_t>(i)] + dk * stride[static_cast<std::size_t>(k)],
                                  value);
          }
        }
      }
    }
  }
  SparseMatrix matrix(rows, rows);
  matrix.setFromTriplets(triplets.begin(), triplets.end());
  return matrix;
}

std::int64_t checked_dimension(int d, std::int64_t sites, std::int64_t budget) {
  std::int64_t rows = 1;
  for (std::int64_t i = 0; i < sites; ++i) {
    rows *= d;
    if (rows > budget) {
      throw InvalidArgument("truncated basis of dimension " + std::to_string(d) + "^" + std::to_string(sites) +
                            " exceeds the row budget " + std::to_string(budget));
    }
  }
  return rows;
}

SiteOperators ensemble_site_operators(const EnsembleSpec& spec, const TruncatedBasisConfig& config,
                                      std::int64_t block_size) {
  const double stiffness = 1.0 + static_cast<double>(spec.n_particles() - 1) * spec.coupling_ratio();
  return site_operators(config.basis_dim, resolved_basis_scale(spec, config, block_size), stiffness);
}

}  // namespace

SparseMatrix build_hamiltonian_matrix(const EnsembleSpec& spec, const TruncatedBasisConfig& config) {
  config.validate();
  checked_dimension(config.basis_dim, spec.n_particles(), config.max_rows);
  const auto ops = ensemble_site_operators(spec, config, spec.n_particles());
  return assemble_block(static_cast<int>(spec.n_particles()), ops, -spec.coupling_ratio(), 0.0);
}

namespace {

constexpr Eigen::Index kDenseBlockLimit = 600;

struct BlockEigen {
  double value;
  Eigen::VectorXd vector;
};

BlockEigen lowest_state(const SparseMatrix& op, const Eigen::VectorXd& warm, const TruncatedBasisConfig& config) {
  if (op.rows() <= kDenseBlockLimit) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver{Eigen::MatrixXd(op)};
    return BlockEigen{solver.eigenvalues()[0], solver.eigenvectors().col(0)};
  }
  auto pair = smallest_eigenpair(op, config.tolerance, config.max_iterations, &warm);
  return BlockEigen{pair.value, std::move(pair.vector)};
}

struct BlockSystem {
  SparseMatrix hamiltonian;  // intra-block part, including intra-block coupling
  SparseMatrix position_sum; // sum of xi_i over the block's particles
};

}  // namespace

SeparabilityEstimate alternating_separability_solver(const EnsembleSpec& spec, const Partition& partition,
                                                     const TruncatedBasisConfig& config) {
  config.validate();
  if (spec.n_particles() != partition.n_particles()) throw InvalidArgument("partition does not match ensemble");
  const auto sizes = partition.block_sizes();
  const auto k = sizes.size();
  for (auto size : sizes) checked_dimension(config.basis_dim, size, config.max_rows);

  const double pair = -spec.coupling_ratio();
  std::map<std::int64_t, BlockSystem> systems;
  for (auto size : sizes) {
    if (systems.count(size)) continue;
    const auto ops = ensemble_site_operators(spec, config, size);
    const SparseMatrix h = assemble_block(static_cast<int>(size), ops, pair, 0.0);
    // Field term alone: subtract the zero-field block from a unit-field one.
    const SparseMatrix with_field = assemble_block(static_cast<int>(size), ops, pair, 1.0);
    SparseMatrix xsum = (with_field - h).pruned();
    systems.emplace(size, BlockSystem{h, xsum});
  }

  // Contraction of the pair coupling with the frozen blocks: a linear field
  // on block j plus the frozen blocks' energies and mutual interaction.
  auto reduced_operator = [&](std::size_t j, const std::vector<double>& position, const std::vector<double>& energy,
                              double& constant) {
    double others = 0.0, others_sq = 0.0, others_energy = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      if (i == j) continue;
      others += position[i];
      others_sq += position[i] * position[i];
      others_energy += energy[i];
    }
    constant = others_energy + pair * 0.5 * (others * others - others_sq);
    const auto& sys = systems.at(sizes[j]);
    return SparseMatrix(sys.hamiltonian + (pair * others) * sys.position_sum);
  };
  auto residuals = [&](const std::vector<Eigen::VectorXd>& states, const std::vector<double>& position,
                       const std::vector<double>& energy, double value) {
    std::vector<double> out(k);
    for (std::size_t j = 0; j < k; ++j) {
      double constant = 0.0;
      const SparseMatrix reduced = reduced_operator(j, position, energy, constant);
      const Eigen::VectorXd image = reduced * states[j];
      out[j] = (image - states[j].dot(image) * states[j]).norm() / std::abs(value);
    }
    return out;
  };

  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> normal;
  SeparabilityEstimate best;
  best.value = std::numeric_limits<double>::infinity();
  std::vector<double> best_position, best_energy;

  for (int restart = 0; restart < config.restarts; ++restart) {
    std::vector<Eigen::VectorXd> states(k);
    std::vector<double> position(k), energy(k);
    for (std::size_t j = 0; j < k; ++j) {
      const auto& sys = systems.at(sizes[j]);
      Eigen::VectorXd psi(sys.hamiltonian.rows());
      for (Eigen::Index i = 0; i < psi.size(); ++i) psi[i] = normal(rng);
      psi.normalize();
      position[j] = psi.dot(sys.position_sum * psi);
      energy[j] = psi.dot(sys.hamiltonian * psi);
      states[j] = std::move(psi);
    }

    SeparabilityRestart record;
    double total = std::numeric_limits<double>::infinity();
    for (int sweep = 1; sweep <= config.max_sweeps; ++sweep) {
      const double previous = total;
      for (std::size_t j = 0; j < k; ++j) {
        const auto& sys = systems.at(sizes[j]);
        double constant = 0.0;
        const SparseMatrix reduced = reduced_operator(j, position, energy, constant);
        auto lowest = lowest_state(reduced, states[j], config);
        states[j] = std::move(lowest.vector);
        position[j] = states[j].dot(sys.position_sum * states[j]);
        energy[j] = states[j].dot(sys.hamiltonian * states[j]);
        total = lowest.value + constant;
      }
      record.sweeps = sweep;
      if (std::abs(total - previous) < config.tolerance) {
        const auto r = residuals(states, position, energy, total);
        if (*std::max_element(r.begin(), r.end()) < config.tolerance) {
          record.converged = true;
          break;
        }
      }
    }
    record.value = total;
    best.restarts.push_back(record);
    if (record.converged && total < best.value) {
      best.value = total;
      best.block_states = states;
      best_position = position;
      best_energy = energy;
    }
  }
  if (!std::isfinite(best.value)) {
    throw NumericalFailure("alternating separability iteration did not converge in any restart");
  }

  best.fixed_point_residuals = residuals(best.block_states, best_position, best_energy, best.value);
  for (std::size_t j = 0; j < k; ++j) {
    best.parallel_means.push_back(best_position[j] / std::sqrt(static_cast<double>(sizes[j])));
  }
  return best;
}

DistributionMinimum brute_force_distribution_min(std::span<const double> per_n_values, double mean,
                                                 int grid_resolution) {
  const auto n_max = static_cast<std::int64_t>(per_n_values.size()) - 1;
  if (n_max < 0) throw InvalidArgument("per-N value table is empty");
  if (!(mean >= 0.0) || mean > static_cast<double>(n_max)) throw InvalidArgument("infeasible mean particle number");
  if (grid_resolution < 1) throw InvalidArgument("grid resolution must be positive");
  const auto f = [&](std::int64_t n) { return per_n_values[static_cast<std::size_t>(n)]; };

  DistributionMinimum best;
  best.value = std::numeric_limits<double>::infinity();
  auto offer = [&](std::vector<std::pair<std::int64_t, double>> support) {
    double value = 0.0;
    for (const auto& [n, p] : support) value += p * f(n);
    if (value < best.value) {
      best.value = value;
      best.distribution.support = std::move(support);
      best.distribution.mean = mean;
    }
  };

  for (std::int64_t a = 0; a <= n_max; ++a) {
    if (static_cast<double>(a) == mean) offer({{a, 1.0}});
  }
  for (std::int64_t a = 0; a <= n_max; ++a) {
    for (std::int64_t b = a + 1; b <= n_max; ++b) {
      const double pb = (mean - static_cast<double>(a)) / static_cast<double>(b - a);
      if (pb < 0.0 || pb > 1.0) continue;
      offer({{a, 1.0 - pb}, {b, pb}});
    }
  }
  for (std::int64_t a = 0; a <= n_max; ++a) {
    if (static_cast<double>(a) >= mean) break;
    for (std::int64_t b = a + 1; b <= n_max; ++b) {
      for (std::int64_t c = b + 1; c <= n_max; ++c) {
        if (static_cast<double>(c) <= mean) continue;
        for (int g = 1; g < grid_resolution; ++g) {
          const double pa = static_cast<double>(g) / grid_resolution;
          // Remaining mass 1 - pa on {b, c} must carry mean - a pa.
          const double pc = (mean - static_cast<double>(a) * pa - static_cast<double>(b) * (1.0 - pa)) /
                            static_cast<double>(c - b);
          const double pb = 1.0 - pa - pc;
          if (pc < 0.0 || pb < 0.0) continue;
          offer({{a, pa}, {b, pb}, {c, pc}});
        }
      }
    }
  }
  return best;
}

}  // namespace oscent
