#include "oscent/fockspace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "oscent/closedform.hpp"
#include "oscent/error.hpp"

namespace oscent {

void NumberDistribution::validate(double tol) const {
  double total = 0.0;
  double first_moment = 0.0;
  for (const auto& [n, p] : support) {
    if (n < 0) throw InvalidArgument("particle numbers must be nonnegative");
    if (!(p >= 0.0)) throw InvalidArgument("probabilities must be nonnegative");
    total += p;
    first_moment += static_cast<double>(n) * p;
  }
  if (std::abs(total - 1.0) > tol) throw InvalidArgument("probabilities do not sum to one");
  if (std::abs(first_moment - mean) > tol * std::max(1.0, std::abs(mean))) {
    throw InvalidArgument("distribution mean does not match");
  }
}

double NumberDistribution::expectation(std::span<const double> values) const {
  double sum = 0.0;
  for (const auto& [n, p] : support) {
    if (n >= static_cast<std::int64_t>(values.size())) throw InvalidArgument("value table too short for support");
    sum += p * values[static_cast<std::size_t>(n)];
  }
  return sum;
}

namespace {

constexpr double kCertificateTol = 1e-12;

double scale_of(std::span<const double> f) {
  double scale = 1.0;
  for (double v : f) scale = std::max(scale, std::abs(v));
  return scale;
}

bool is_discretely_convex(std::span<const double> f) {
  const double tol = kCertificateTol * scale_of(f);
  for (std::size_t n = 1; n + 1 < f.size(); ++n) {
    if (f[n + 1] + f[n - 1] - 2.0 * f[n] < -tol) return false;
  }
  return true;
}

bool line_supports(std::span<const double> f, double intercept, double slope) {
  for (std::size_t n = 0; n < f.size(); ++n) {
    const double line = intercept + slope * static_cast<double>(n);
    if (line > f[n] + kCertificateTol * (1.0 + std::abs(f[n]))) return false;
  }
  return true;
}

ConvexSolution single_point(std::span<const double> f, std::int64_t n) {
  const auto last = static_cast<std::int64_t>(f.size()) - 1;
  const auto at = [&](std::int64_t i) { return f[static_cast<std::size_t>(i)]; };
  // Midpoint of the discrete subgradient interval at n.
  double slope = 0.0;
  if (n > 0 && n < last) {
    slope = 0.5 * ((at(n) - at(n - 1)) + (at(n + 1) - at(n)));
  } else if (n > 0) {
    slope = at(n) - at(n - 1);
  } else if (n < last) {
    slope = at(n + 1) - at(n);
  }
  ConvexSolution s;
  s.distribution.support = {{n, 1.0}};
  s.distribution.mean = static_cast<double>(n);
  s.value = at(n);
  s.line_slope = slope;
  s.line_intercept = at(n) - slope * static_cast<double>(n);
  return s;
}

ConvexSolution two_point(std::span<const double> f, std::int64_t lo, std::int64_t hi, double mean) {
  const double f_lo = f[static_cast<std::size_t>(lo)];
  const double f_hi = f[static_cast<std::size_t>(hi)];
  const double width = static_cast<double>(hi - lo);
  const double p_hi = (mean - static_cast<double>(lo)) / width;
  const double p_lo = (static_cast<double>(hi) - mean) / width;
  ConvexSolution s;
  s.distribution.support = {{lo, p_lo}, {hi, p_hi}};
  s.distribution.mean = mean;
  s.value = p_lo * f_lo + p_hi * f_hi;
  s.line_slope = (f_hi - f_lo) / width;
  s.line_intercept = f_lo - s.line_slope * static_cast<double>(lo);
  return s;
}

ConvexSolution exhaustive_support_search(std::span<const double> f, double mean) {
  const auto last = static_cast<std::int64_t>(f.size()) - 1;
  ConvexSolution best;
  best.value = std::numeric_limits<double>::infinity();
  const double floor_mean = std::floor(mean);
  if (floor_mean == mean) best = single_point(f, static_cast<std::int64_t>(floor_mean));
  for (std::int64_t a = 0; a <= last; ++a) {
    if (static_cast<double>(a) > mean) break;
    for (std::int64_t b = std::max<std::int64_t>(a + 1, static_cast<std::int64_t>(std::ceil(mean))); b <= last; ++b) {
      if (static_cast<double>(a) == mean && static_cast<double>(b) != mean) {
        // Degenerate pair with all weight on a; covered by single_point.
        continue;
      }
      auto candidate = two_point(f, a, b, mean);
      if (candidate.value < best.value) best = std::move(candidate);
    }
  }

  // Three-point supports cannot beat the best pair (the objective is linear
  // along each feasible segment); scan a coarse grid to confirm it.
  constexpr int kGrid = 8;
  const double tol = kCertificateTol * scale_of(f);
  for (std::int64_t a = 0; a <= last && static_cast<double>(a) < mean; ++a) {
    for (std::int64_t b = a + 1; b <= last; ++b) {
      for (std::int64_t c = std::max(b + 1, static_cast<std::int64_t>(std::floor(mean)) + 1); c <= last; ++c) {
        for (int g = 1; g < kGrid; ++g) {
          const double p_a = static_cast<double>(g) / kGrid;
          const double p_c = (mean - static_cast<double>(a) * p_a - static_cast<double>(b) * (1.0 - p_a)) /
                             static_cast<double>(c - b);
          const double p_b = 1.0 - p_a - p_c;
          if (p_c < 0.0 || p_b < 0.0) continue;
          const double value = p_a * f[static_cast<std::size_t>(a)] + p_b * f[static_cast<std::size_t>(b)] +
                               p_c * f[static_cast<std::size_t>(c)];
          if (value < best.value - tol) {
            throw NumericalFailure("three-point support improves on every two-point support");
          }
        }
      }
    }
  }
  best.used_fallback = true;
  best.diagnostic = "per-N values are not convex; minimum taken from exhaustive support search";
  return best;
}

}  // namespace

ConvexSolution convex_min_over_distribution(std::span<const double> per_n_values, double mean) {
  if (per_n_values.empty()) throw InvalidArgument("per-N value table is empty");
  for (double v : per_n_values) {
    if (!std::isfinite(v)) throw InvalidArgument("per-N values must be finite");
  }
  const auto last = static_cast<std::int64_t>(per_n_values.size()) - 1;
  if (!std::isfinite(mean) || mean < 0.0 || mean > static_cast<double>(last)) {
    throw InvalidArgument("mean particle number " + std::to_string(mean) + " is infeasible on 0.." +
                          std::to_string(last));
  }

  if (!is_discretely_convex(per_n_values)) return exhaustive_support_search(per_n_values, mean);

  const auto lo = static_cast<std::int64_t>(std::floor(mean));
  ConvexSolution s = (static_cast<double>(lo) == mean) ? single_point(per_n_values, lo)
                                                        : two_point(per_n_values, lo, lo + 1, mean);
  if (!line_supports(per_n_values, s.line_intercept, s.line_slope)) {
    return exhaustive_support_search(per_n_values, mean);
  }
  return s;
}

std::int64_t default_scan_limit(double mean) {
  if (!(mean >= 0.0) || mean > 1e15) throw InvalidArgument("mean particle number outside the supported range");
  return std::max<std::int64_t>(50, 4 * static_cast<std::int64_t>(std::ceil(mean)));
}

double separable_min_energy_at(double coupling_ratio, std::int64_t n) {
  if (n < 0) throw InvalidArgument("particle number must be nonnegative");
  if (n == 0) return 0.0;
  return fully_separable_min_energy(EnsembleSpec(n, coupling_ratio));
}

double ground_energy_at(double coupling_ratio, std::int64_t n) {
  if (n < 0) throw InvalidArgument("particle number must be nonnegative");
  if (n == 0) return 0.0;
  return ground_energy(EnsembleSpec(n, coupling_ratio));
}

std::vector<double> separable_min_energies(double coupling_ratio, std::int64_t n_max) {
  std::vector<double> values;
  for (std::int64_t n = 0; n <= n_max; ++n) values.push_back(separable_min_energy_at(coupling_ratio, n));
  return values;
}

std::vector<double> ground_energies(double coupling_ratio, std::int64_t n_max) {
  std::vector<double> values;
  for (std::int64_t n = 0; n <= n_max; ++n) values.push_back(ground_energy_at(coupling_ratio, n));
  return values;
}

namespace {

template <typename PerN>
double floor_ceiling_mixture(double coupling_ratio, double mean, PerN per_n) {
  if (!std::isfinite(mean) || mean < 0.0) throw InvalidArgument("mean particle number must be nonnegative");
  if (mean > 1e15) throw InvalidArgument("mean particle number exceeds the supported range");
  if (!std::isfinite(coupling_ratio) || coupling_ratio < 0.0) {
    throw InvalidArgument("coupling ratio must be finite and nonnegative");
  }
  const double floor_mean = std::floor(mean);
  const auto lo = static_cast<std::int64_t>(floor_mean);
  const double w_lo = floor_mean + 1.0 - mean;
  const double w_hi = mean - floor_mean;
  return w_lo * per_n(coupling_ratio, lo) + w_hi * per_n(coupling_ratio, lo + 1);
}

}  // namespace

double sep_min_energy_mean_n(double coupling_ratio, double mean) {
  return floor_ceiling_mixture(coupling_ratio, mean, separable_min_energy_at);
}

double ground_energy_mean_n(double coupling_ratio, double mean) {
  return floor_ceiling_mixture(coupling_ratio, mean, ground_energy_at);
}

VisibilityReport mean_n_visibility(double coupling_ratio, double mean) {
  const double ground = ground_energy_mean_n(coupling_ratio, mean);
  const double bound = sep_min_energy_mean_n(coupling_ratio, mean);
  if (bound == 0.0 && ground == 0.0) return VisibilityReport{0.0, 0.0, 0.0};
  auto report = visibility(ground, bound);
  const double gap = floor_ceiling_mixture(coupling_ratio, mean, [](double r, std::int64_t n) {
    return n == 0 ? 0.0 : separable_gap(EnsembleSpec(n, r));
  });
  report.visibility = gap / (bound + ground);
  return report;
}

}  // namespace oscent
