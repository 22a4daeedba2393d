#include "oscent/thermal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "oscent/error.hpp"
#include "oscent/fockspace.hpp"
#include "oscent/parallel.hpp"
#include "oscent/visibility.hpp"

namespace oscent {
namespace {

constexpr std::int64_t kMaxSeriesTerms = 10'000'000;

// log(2 sinh x) for x > 0 without overflow.
double log_two_sinh(double x) { return x + std::log(-std::expm1(-2.0 * x)); }

double coth(double x) { return 1.0 / std::tanh(x); }

double sector_frequency(double coupling_ratio, std::int64_t n) {
  return std::sqrt(1.0 + static_cast<double>(n) * coupling_ratio);
}

// Mean energy of the N-particle sector at inverse temperature beta:
// (1/2) coth(beta/2) + (N-1) (s_N/2) coth(beta s_N/2). Exactly 0 for N = 0.
double sector_energy(const ThermalParams& p, std::int64_t n) {
  const double s = sector_frequency(p.coupling_ratio, n);
  return 0.5 * coth(0.5 * p.beta) + static_cast<double>(n - 1) * 0.5 * s * coth(0.5 * p.beta * s);
}

}  // namespace

void ThermalParams::validate() const {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw InvalidArgument("inverse temperature must be finite and positive");
  if (!std::isfinite(alpha)) throw InvalidArgument("fugacity parameter must be finite");
  if (!(coupling_ratio >= 0.0) || !std::isfinite(coupling_ratio)) {
    throw InvalidArgument("coupling ratio must be finite and nonnegative");
  }
}

double log_gamma_n(const ThermalParams& params, std::int64_t n) {
  params.validate();
  if (n < 0) throw InvalidArgument("particle number must be nonnegative");
  if (n == 0) return 0.0;
  const double s = sector_frequency(params.coupling_ratio, n);
  return -params.alpha * static_cast<double>(n) - log_two_sinh(0.5 * params.beta) -
         static_cast<double>(n - 1) * log_two_sinh(0.5 * params.beta * s);
}

double gamma_n(const ThermalParams& params, std::int64_t n) {
  return std::exp(log_gamma_n(params, n));
}

double PartitionFunction::value() const { return std::exp(log_value); }

ThermalMoments thermal_moments(const ThermalParams& params, double tol) {
  params.validate();
  // At R = 0 every sector ratio equals exp(-alpha) / (2 sinh(beta/2)).
  if (params.coupling_ratio == 0.0 && -params.alpha - log_two_sinh(0.5 * params.beta) >= 0.0) {
    throw NumericalFailure("partition function diverges: uncoupled ensemble with exp(-alpha) >= 2 sinh(beta/2)");
  }
  if (!(tol > 0.0)) throw InvalidArgument("series tolerance must be positive");
  const double log_tol = std::log(tol);

  // Running sums scaled by exp(-shift).
  double shift = 0.0;
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, se = 0.0;
  double prev_majorant = -std::numeric_limits<double>::infinity();
  double prev_log_ratio = std::numeric_limits<double>::infinity();

  for (std::int64_t n = 0; n < kMaxSeriesTerms; ++n) {
    const double log_term = log_gamma_n(params, n);
    const double energy = sector_energy(params, n);
    if (n == 0 || log_term > shift) {
      const double rescale = (n == 0) ? 0.0 : std::exp(shift - log_term);
      s0 *= rescale;
      s1 *= rescale;
      s2 *= rescale;
      se *= rescale;
      shift = log_term;
    }
    const double w = std::exp(log_term - shift);
    const double nd = static_cast<double>(n);
    s0 += w;
    s1 += nd * w;
    s2 += nd * nd * w;
    se += energy * w;

    // Dominates every summand of the N, N^2 and energy series.
    const double majorant = log_term + 2.0 * std::log1p(nd) + std::log1p(energy);
    const double log_ratio = majorant - prev_majorant;
    prev_majorant = majorant;
    const bool ratios_falling = log_ratio < 0.0 && log_ratio <= prev_log_ratio;
    prev_log_ratio = log_ratio;
    if (n >= 2 && ratios_falling) {
      // Tail after n is at most term_n * rho / (1 - rho) while ratios keep falling.
      const double rho = std::exp(log_ratio);
      const double log_tail = majorant + std::log(rho) - std::log1p(-rho);
      const double log_z = shift + std::log(s0);
      if (log_tail < log_tol + log_z) {
        ThermalMoments m;
        m.log_z = log_z;
        m.mean_n = s1 / s0;
        m.variance_n = std::max(0.0, s2 / s0 - m.mean_n * m.mean_n);
        m.mean_energy = se / s0;
        m.n_terms = n + 1;
        return m;
      }
    }
  }
  throw NumericalFailure("thermal series did not converge within " + std::to_string(kMaxSeriesTerms) + " terms");
}

PartitionFunction partition_function(const ThermalParams& params, double tol) {
  const auto m = thermal_moments(params, tol);
  return PartitionFunction{m.log_z, m.n_terms};
}

double mean_particle_number(const ThermalParams& params, double tol) { return thermal_moments(params, tol).mean_n; }

double mean_energy(const ThermalParams& params, double tol) { return thermal_moments(params, tol).mean_energy; }

AlphaSolution solve_alpha_for_mean_n(double coupling_ratio, double temperature, double target, double tol) {
  if (!(temperature > 0.0) || !std::isfinite(temperature)) throw InvalidArgument("temperature must be positive");
  if (!(target >= 0.0) || !std::isfinite(target)) throw InvalidArgument("target mean particle number must be nonnegative");
  if (!(coupling_ratio >= 0.0) || !std::isfinite(coupling_ratio)) {
    throw InvalidArgument("coupling ratio must be finite and nonnegative");
  }
  if (!(tol > 0.0)) throw InvalidArgument("tolerance must be positive");
  if (target == 0.0) {
    return AlphaSolution{std::numeric_limits<double>::infinity(), true, 0.0, 0};
  }

  const double beta = 1.0 / temperature;
  auto moments_at = [&](double alpha) {
    return thermal_moments(ThermalParams{beta, alpha, coupling_ratio}, kDefaultSeriesTol);
  };

  // Smallest admissible alpha: the series diverges at or below it when R = 0.
  const double alpha_floor =
      coupling_ratio == 0.0 ? -log_two_sinh(0.5 * beta) : -std::numeric_limits<double>::infinity();

  constexpr double kMaxReach = 1e8;
  double lo = std::isfinite(alpha_floor) ? alpha_floor + 1.0 : 0.0;
  double hi = lo;
  int iterations = 0;

  // Widen until mean_n(lo) >= target >= mean_n(hi); mean_n decreases in alpha.
  for (double step = 1.0; moments_at(hi).mean_n > target; step *= 2.0) {
    ++iterations;
    lo = hi;
    hi += step;
    if (step > kMaxReach) throw NumericalFailure("cannot bracket fugacity from above");
  }
  if (std::isfinite(alpha_floor)) {
    for (double gap = lo - alpha_floor; moments_at(lo).mean_n < target; gap *= 0.5) {
      ++iterations;
      hi = std::min(hi, lo);
      lo = alpha_floor + 0.5 * gap;
      if (gap < 1e-300) throw NumericalFailure("target mean particle number not attainable below the divergence");
    }
  } else {
    for (double step = 1.0; moments_at(lo).mean_n < target; step *= 2.0) {
      ++iterations;
      hi = std::min(hi, lo);
      lo -= step;
      if (step > kMaxReach) throw NumericalFailure("cannot bracket fugacity from below");
    }
  }

  double alpha = 0.5 * (lo + hi);
  for (int it = 0; it < 400; ++it) {
    ++iterations;
    const auto m = moments_at(alpha);
    const double residual = m.mean_n - target;
    if (std::abs(residual) <= tol) return AlphaSolution{alpha, false, residual, iterations};
    if (residual > 0.0) {
      lo = alpha;
    } else {
      hi = alpha;
    }
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(alpha))) {
      if (std::abs(residual) <= std::max(tol, 1e-9 * std::max(1.0, target))) {
        return AlphaSolution{alpha, false, residual, iterations};
      }
      throw NumericalFailure("fugacity bracket collapsed with residual " + std::to_string(residual));
    }
    // d<N>/d alpha = -Var(N).
    double next = m.variance_n > 0.0 ? alpha + residual / m.variance_n : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    alpha = next;
  }
  throw NumericalFailure("fugacity search did not converge");
}

ThermalPoint thermal_visibility(double coupling_ratio, double temperature, double target_mean_n, double tol) {
  if (!(target_mean_n > 0.0)) throw InvalidArgument("thermal visibility needs a positive mean particle number");
  const auto solution = solve_alpha_for_mean_n(coupling_ratio, temperature, target_mean_n, tol);
  const auto m = thermal_moments(ThermalParams{1.0 / temperature, solution.alpha, coupling_ratio}, kDefaultSeriesTol);
  ThermalPoint point;
  point.temperature = temperature;
  point.alpha = solution.alpha;
  point.mean_n = m.mean_n;
  point.mean_energy = m.mean_energy;
  point.log_partition = m.log_z;
  point.visibility = visibility(m.mean_energy, sep_min_energy_mean_n(coupling_ratio, m.mean_n)).visibility;
  return point;
}

std::vector<ThermalPoint> thermal_grid(double coupling_ratio, std::span<const double> mean_ns,
                                       std::span<const double> temperatures, double tol, unsigned threads) {
  std::vector<ThermalPoint> points(mean_ns.size() * temperatures.size());
  parallel_for(points.size(), threads, [&](std::size_t index) {
    const auto i = index / temperatures.size();
    const auto j = index % temperatures.size();
    points[index] = thermal_visibility(coupling_ratio, temperatures[j], mean_ns[i], tol);
  });
  return points;
}

}  // namespace oscent
