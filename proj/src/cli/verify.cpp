#include "oscent/cli/verify.hpp"

#include <cmath>
#include <cstdio>

#include "oscent/closedform.hpp"
#include "oscent/fockspace.hpp"
#include "oscent/oracle.hpp"
#include "oscent/thermal.hpp"
#include "oscent/visibility.hpp"

namespace oscent::cli {

namespace {

std::string label(const char* fmt, double a, double b) {
  char buffer[128];
  std::snprintf(buffer, sizeof buffer, fmt, a, b);
  return buffer;
}

void record(std::vector<VerificationCheck>& checks, std::string name, double expected, double computed,
            double tolerance, bool relative) {
  const double error = relative ? std::abs(computed - expected) / std::abs(expected) : std::abs(computed - expected);
  checks.push_back(VerificationCheck{std::move(name), expected, computed, tolerance, relative, error <= tolerance});
}

int basis_dim_for(std::int64_t n, const VerificationOptions& options) {
  int d = options.max_basis_dim;
  auto rows = [&](int dim) {
    double total = 1.0;
    for (std::int64_t i = 0; i < n; ++i) total *= dim;
    return total;
  };
  while (d > 2 && rows(d) > static_cast<double>(options.max_rows)) --d;
  return d;
}

void oracle_checks(std::vector<VerificationCheck>& checks, const VerificationOptions& options) {
  const std::vector<std::int64_t> sizes = options.quick ? std::vector<std::int64_t>{2, 3} : std::vector<std::int64_t>{2, 3, 4};
  const std::vector<double> ratios = options.quick ? std::vector<double>{1.0} : std::vector<double>{0.5, 1.0, 1.5, 10.0};
  for (auto n : sizes) {
    for (double r : ratios) {
      const EnsembleSpec spec(n, r);
      TruncatedBasisConfig config;
      config.basis_dim = basis_dim_for(n, options);
      config.max_rows = options.max_rows;
      const double ground = smallest_eigenpair(build_hamiltonian_matrix(spec, config), 1e-9).value;
      const double bound = alternating_separability_solver(spec, Partition::full(n), config).value;
      const auto nd = static_cast<double>(n);
      record(checks, label("ground energy N=%g R=%g", nd, r), ground_energy(spec), ground, 1e-6, true);
      record(checks, label("separable bound N=%g R=%g", nd, r), fully_separable_min_energy(spec), bound, 1e-6, true);
      record(checks, label("visibility N=%g R=%g", nd, r), max_visibility(spec).visibility,
             visibility(ground, bound).visibility, 1e-5, false);
      if (n >= 3) {
        std::vector<std::vector<std::int64_t>> blocks{{}, {}};
        for (std::int64_t i = 0; i < n; ++i) blocks[i < 2 ? 0 : 1].push_back(i);
        const auto partition = Partition::make(n, blocks);
        const double block_bound = alternating_separability_solver(spec, partition, config).value;
        record(checks, label("partition bound N=%g R=%g", nd, r), partition_min_energy(spec, partition).value,
               block_bound, 1e-6, true);
      }
    }
  }
}

void fock_checks(std::vector<VerificationCheck>& checks) {
  for (double r : {0.1, 1.0, 10.0}) {
    for (double mean : {0.4, 1.5, 2.25, 3.0, 7.8}) {
      const auto table = separable_min_energies(r, default_scan_limit(mean));
      const auto brute = brute_force_distribution_min(table, mean);
      record(checks, label("mean-N separable bound R=%g Nbar=%g", r, mean), brute.value,
             sep_min_energy_mean_n(r, mean), 1e-10, false);
    }
  }
}

void thermal_checks(std::vector<VerificationCheck>& checks) {
  for (double beta : {0.5, 2.0}) {
    const double alpha = 1.5;
    const double q = std::exp(-alpha) / (2.0 * std::sinh(beta / 2.0));
    const auto moments = thermal_moments(ThermalParams{beta, alpha, 0.0});
    record(checks, label("geometric log Z beta=%g alpha=%g", beta, alpha), -std::log1p(-q), moments.log_z, 1e-12,
           true);
    record(checks, label("geometric <N> beta=%g alpha=%g", beta, alpha), q / (1.0 - q), moments.mean_n, 1e-12, true);
  }
  for (double r : {0.5, 1.0}) {
    const ThermalParams params{1.0, 0.5, r};
    const double h = 1e-5;
    auto log_z = [&](double beta, double alpha) { return partition_function(ThermalParams{beta, alpha, r}).log_value; };
    const double d_alpha = (log_z(params.beta, params.alpha + h) - log_z(params.beta, params.alpha - h)) / (2.0 * h);
    const double d_beta = (log_z(params.beta + h, params.alpha) - log_z(params.beta - h, params.alpha)) / (2.0 * h);
    const auto moments = thermal_moments(params);
    record(checks, label("<N> = -d ln Z / d alpha R=%g beta=%g", r, params.beta), -d_alpha, moments.mean_n, 1e-6,
           true);
    record(checks, label("<H> = -d ln Z / d beta R=%g beta=%g", r, params.beta), -d_beta, moments.mean_energy, 1e-6,
           true);
  }
}

}  // namespace

std::vector<VerificationCheck> run_verification_suite(const VerificationOptions& options) {
  std::vector<VerificationCheck> checks;
  oracle_checks(checks, options);
  fock_checks(checks);
  thermal_checks(checks);
  return checks;
}

}  // namespace oscent::cli
