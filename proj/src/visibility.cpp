#include "oscent/visibility.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "oscent/closedform.hpp"
#include "oscent/error.hpp"

namespace oscent {

VisibilityReport visibility(double expectation, double separable_bound) {
  if (!(expectation >= 0.0) || !std::isfinite(expectation)) {
    throw InvalidArgument("expectation value must be finite and nonnegative");
  }
  if (!(separable_bound > 0.0) || !std::isfinite(separable_bound)) {
    throw InvalidArgument("separable bound must be finite and positive");
  }
  const double denominator = separable_bound + expectation;
  return VisibilityReport{expectation, separable_bound, (separable_bound - expectation) / denominator};
}

namespace {

// Partition bound minus ground energy, written as a sum of nonnegative terms
// so that weak coupling does not subtract two nearly equal energies.
double partition_gap(const EnsembleSpec& spec, std::span<const std::int64_t> block_sizes) {
  const double n = static_cast<double>(spec.n_particles());
  const double r = spec.coupling_ratio();
  const double s = std::sqrt(1.0 + n * r);
  double sum = 0.0;
  for (auto size : block_sizes) {
    const double m = static_cast<double>(size);
    const double t = std::sqrt(1.0 + (n - m) * r);
    sum += m * (n - m) / ((t + s) * (t + 1.0));
  }
  return 0.5 * r * r * sum / (1.0 + s);
}

}  // namespace

double separable_gap(const EnsembleSpec& spec) {
  // N equal terms of partition_gap with block size 1.
  const double n = static_cast<double>(spec.n_particles());
  const double r = spec.coupling_ratio();
  const double s = std::sqrt(1.0 + n * r);
  const double t = std::sqrt(1.0 + (n - 1.0) * r);
  return 0.5 * r * r * n * (n - 1.0) / ((t + s) * (t + 1.0) * (1.0 + s));
}

VisibilityReport max_visibility(const EnsembleSpec& spec) {
  auto report = visibility(ground_energy(spec), fully_separable_min_energy(spec));
  report.visibility = separable_gap(spec) / (report.separable_bound + report.expectation);
  return report;
}

VisibilityReport partition_visibility(const EnsembleSpec& spec, const Partition& partition) {
  if (partition.n_particles() != spec.n_particles()) throw InvalidArgument("partition does not match ensemble");
  return partition_visibility(spec, partition.block_sizes());
}

VisibilityReport partition_visibility(const EnsembleSpec& spec, std::span<const std::int64_t> block_sizes) {
  if (static_cast<std::int64_t>(block_sizes.size()) == spec.n_particles() &&
      std::all_of(block_sizes.begin(), block_sizes.end(), [](std::int64_t m) { return m == 1; })) {
    return max_visibility(spec);
  }
  auto report = visibility(ground_energy(spec), partition_min_energy(spec, block_sizes));
  report.visibility = partition_gap(spec, block_sizes) / (report.separable_bound + report.expectation);
  return report;
}

double optimal_particle_number(double coupling_ratio) {
  if (coupling_ratio == 0.0) {
    throw DivergentOptimum("uncoupled ensemble: the optimal particle number diverges");
  }
  if (!(coupling_ratio > 0.0) || !std::isfinite(coupling_ratio)) {
    throw InvalidArgument("coupling ratio must be finite and positive");
  }
  const double r = coupling_ratio;
  return (1.0 + 2.0 * r + std::sqrt(5.0 + 4.0 * r)) / (2.0 * r);
}

AsymptoticLimits asymptotic_limits(std::int64_t n_particles) {
  if (n_particles < 1) throw InvalidArgument("particle number must be at least 1");
  const double n = static_cast<double>(n_particles);
  const double gap = std::sqrt(n) - std::sqrt(n - 1.0);
  return AsymptoticLimits{gap * gap, 3.0 - 2.0 * std::numbers::sqrt2, 0.0};
}

}  // namespace oscent
