#pragma once

#include <cstdint>
#include <span>

#include "oscent/model.hpp"

namespace oscent {

/// Contrast between a measured energy and the separable bound.
///
/// `visibility` = (bound - expectation) / (bound + expectation). A positive
/// value certifies entanglement with respect to the chosen observable; the
/// raw energies are kept so callers can reason about detector resolution.
struct VisibilityReport {
  double expectation = 0.0;
  double separable_bound = 0.0;
  double visibility = 0.0;

  bool entanglement_detected() const { return visibility > 0.0; }
};

/// Requires expectation >= 0 and separable_bound > 0.
VisibilityReport visibility(double expectation, double separable_bound);

/// Fully separable minimum minus ground energy, evaluated without
/// subtracting the two energies.
double separable_gap(const EnsembleSpec& spec);

/// Ground state of the N-particle Hamiltonian against the fully separable
/// minimum.
VisibilityReport max_visibility(const EnsembleSpec& spec);

/// Ground state against the minimum over states that factorize across the
/// blocks of `partition`.
VisibilityReport partition_visibility(const EnsembleSpec& spec, const Partition& partition);
/// Same from block sizes only.
VisibilityReport partition_visibility(const EnsembleSpec& spec, std::span<const std::int64_t> block_sizes);

/// Real stationary point of the maximal visibility in N,
/// (1 + 2R + sqrt(5 + 4R)) / (2R). Throws DivergentOptimum for R = 0.
double optimal_particle_number(double coupling_ratio);

/// Reference limits of the maximal visibility.
struct AsymptoticLimits {
  /// R -> infinity at the given N: (sqrt(N) - sqrt(N - 1))^2.
  double strong_coupling = 0.0;
  /// R -> infinity at N = 2: 3 - 2 sqrt(2).
  double bipartite_strong_coupling = 0.0;
  /// N -> infinity at any R.
  double macroscopic = 0.0;
};

AsymptoticLimits asymptotic_limits(std::int64_t n_particles);

}  // namespace oscent
