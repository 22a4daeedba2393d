#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace oscent {

/// Grand-canonical state exp(-alpha N - beta H) / Z in natural units:
/// `beta` is measured in 1/(hbar Omega), so beta = 1/T with T in units of
/// hbar Omega / k.
struct ThermalParams {
  double beta = 1.0;
  double alpha = 0.0;
  double coupling_ratio = 0.0;

  /// Throws InvalidArgument for beta <= 0, R < 0 or non-finite entries.
  void validate() const;
};

inline constexpr double kDefaultSeriesTol = 1e-15;

/// ln Gamma_N; Gamma_0 = 1 exactly.
double log_gamma_n(const ThermalParams& params, std::int64_t n);
/// Gamma_N, the weight of the N-particle sector. May overflow for strongly
/// negative alpha; use log_gamma_n there.
double gamma_n(const ThermalParams& params, std::int64_t n);

struct PartitionFunction {
  double log_value = 0.0;
  std::int64_t n_terms = 0;

  /// exp(log_value); +inf if Z exceeds the double range.
  double value() const;
};

/// All sector sums from one truncated pass over N.
struct ThermalMoments {
  double log_z = 0.0;
  double mean_n = 0.0;
  double variance_n = 0.0;
  double mean_energy = 0.0;  // units of hbar Omega
  std::int64_t n_terms = 0;
};

/// Sums Gamma_N until the geometric tail bound of the remaining terms falls
/// below tol times the partial partition function. Throws NumericalFailure
/// if R = 0 and exp(-alpha) >= 2 sinh(beta/2), where the series diverges.
ThermalMoments thermal_moments(const ThermalParams& params, double tol = kDefaultSeriesTol);

PartitionFunction partition_function(const ThermalParams& params, double tol = kDefaultSeriesTol);
double mean_particle_number(const ThermalParams& params, double tol = kDefaultSeriesTol);
double mean_energy(const ThermalParams& params, double tol = kDefaultSeriesTol);

struct AlphaSolution {
  double alpha = 0.0;
  /// True when the target is only reached in the limit alpha -> +inf
  /// (target 0); alpha is then +inf.
  bool at_boundary = false;
  double residual = 0.0;
  int iterations = 0;
};

/// Fugacity parameter giving mean particle number `target` at temperature
/// `temperature` (units of hbar Omega / k). Safeguarded Newton on a bracket
/// that is widened until it contains the root.
AlphaSolution solve_alpha_for_mean_n(double coupling_ratio, double temperature, double target, double tol = 1e-12);

struct ThermalPoint {
  double temperature = 0.0;  // units of hbar Omega / k
  double alpha = 0.0;
  double mean_n = 0.0;
  double mean_energy = 0.0;  // units of hbar Omega
  double log_partition = 0.0;
  double visibility = 0.0;
};

/// Thermal state at (T, mean N) against the separable Fock-space bound at the
/// same mean particle number.
ThermalPoint thermal_visibility(double coupling_ratio, double temperature, double target_mean_n, double tol = 1e-12);

/// Row-major over (mean N, T): index i * temperatures.size() + j. Points are
/// computed on `threads` workers; the result order does not depend on it.
std::vector<ThermalPoint> thermal_grid(double coupling_ratio, std::span<const double> mean_ns,
                                       std::span<const double> temperatures, double tol = 1e-12,
                                       unsigned threads = 1);

}  // namespace oscent
