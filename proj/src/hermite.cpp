#include "oscent/hermite.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "oscent/error.hpp"

namespace oscent {
namespace {

constexpr double kRescaleAbove = 1e150;
constexpr double kRescaleFactor = 1e-150;
const double kLogRescale = std::log(kRescaleFactor);

void check_order(int n, int max_order) {
  if (n < 0) throw InvalidArgument("Hermite order must be nonnegative");
  if (n > max_order) {
    throw InvalidArgument("Hermite order " + std::to_string(n) + " exceeds configured maximum " +
                          std::to_string(max_order));
  }
}

}  // namespace

std::vector<double> hermite_functions(int n_max, double xi, int max_order) {
  check_order(n_max, max_order);
  // Recurrence runs on the polynomial part; exp(log_envelope) is applied at
  // the end of each step.
  const double pi_quarter = std::pow(std::numbers::pi, -0.25);
  double log_envelope = -0.5 * xi * xi;
  std::vector<double> scaled(static_cast<std::size_t>(n_max) + 1);
  std::vector<double> log_scale(static_cast<std::size_t>(n_max) + 1);
  double prev = 0.0;
  double curr = pi_quarter;
  scaled[0] = curr;
  log_scale[0] = log_envelope;
  for (int n = 0; n < n_max; ++n) {
    const double next = (std::numbers::sqrt2 * xi * curr - std::sqrt(static_cast<double>(n)) * prev) /
                        std::sqrt(static_cast<double>(n + 1));
    prev = curr;
    curr = next;
    if (std::abs(curr) > kRescaleAbove) {
      curr *= kRescaleFactor;
      prev *= kRescaleFactor;
      log_envelope -= kLogRescale;
    }
    scaled[static_cast<std::size_t>(n) + 1] = curr;
    log_scale[static_cast<std::size_t>(n) + 1] = log_envelope;
  }
  for (std::size_t n = 0; n < scaled.size(); ++n) {
    if (scaled[n] != 0.0) {
      const double magnitude = std::log(std::abs(scaled[n])) + log_scale[n];
      scaled[n] = std::copysign(std::exp(magnitude), scaled[n]);
    }
  }
  return scaled;
}

double hermite_function(int n, double xi, int max_order) {
  check_order(n, max_order);
  if (n == 0) return std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * xi * xi);
  return hermite_functions(n, xi, max_order).back();
}

}  // namespace oscent
