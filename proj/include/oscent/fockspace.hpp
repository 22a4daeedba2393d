#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "oscent/visibility.hpp"

namespace oscent {

/// Probabilities p_N of finding N particles; support sorted by N.
struct NumberDistribution {
  std::vector<std::pair<std::int64_t, double>> support;
  double mean = 0.0;

  /// Throws InvalidArgument if some p_N < 0, the weights do not sum to one,
  /// or the first moment differs from `mean` (both within `tol`).
  void validate(double tol = 1e-12) const;

  /// Sum of values[N] * p_N.
  double expectation(std::span<const double> values) const;
};

/// Minimizer of sum_N f(N) p_N at fixed normalization and mean, together with
/// the supporting line mu_1 + mu_N * N <= f(N) that certifies optimality.
struct ConvexSolution {
  NumberDistribution distribution;
  double value = 0.0;
  double line_intercept = 0.0;  // mu_1
  double line_slope = 0.0;      // mu_N
  /// Set when f failed the discrete convexity check and the exhaustive
  /// support search was used instead of the floor/ceiling rule.
  bool used_fallback = false;
  std::string diagnostic;
};

/// `per_n_values[N]` is f(N) for N = 0, ..., n_max. Requires
/// 0 <= mean <= n_max.
ConvexSolution convex_min_over_distribution(std::span<const double> per_n_values, double mean);

/// max(50, 4 * ceil(mean)).
std::int64_t default_scan_limit(double mean);

/// Fixed-N minima with the empty sector included (value 0 at N = 0).
double separable_min_energy_at(double coupling_ratio, std::int64_t n);
double ground_energy_at(double coupling_ratio, std::int64_t n);
std::vector<double> separable_min_energies(double coupling_ratio, std::int64_t n_max);
std::vector<double> ground_energies(double coupling_ratio, std::int64_t n_max);

/// Minimal energy of a fully separable Fock-space state with mean particle
/// number `mean`: the floor/ceiling mixture of fixed-N separable minima.
double sep_min_energy_mean_n(double coupling_ratio, double mean);

/// Minimal energy of an arbitrary Fock-space state with mean particle
/// number `mean`.
double ground_energy_mean_n(double coupling_ratio, double mean);

/// Visibility of the constrained ground state. The vacuum (mean 0) has both
/// energies zero and is reported with visibility 0.
VisibilityReport mean_n_visibility(double coupling_ratio, double mean);

}  // namespace oscent
