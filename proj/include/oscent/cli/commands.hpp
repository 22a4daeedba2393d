#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "oscent/cli/table.hpp"
#include "oscent/cli/verify.hpp"
#include "oscent/model.hpp"

namespace oscent::cli {

enum class OutputFormat { csv, json };

enum ExitCode : int {
  kSuccess = 0,
  kParameterError = 1,
  kNumericalFailure = 2,
  kVerificationMismatch = 3,
};

/// `points` samples from `first` to `last` inclusive, evenly spaced or, with
/// `log`, evenly spaced in log.
struct Range {
  double first = 0.0;
  double last = 0.0;
  std::int64_t points = 1;
  bool log = false;

  void validate(const char* what) const;
  std::vector<double> values() const;
};

/// Parses "a:b" or "a:b:n". Without n the range uses `default_points`
/// samples, or unit steps when `default_points` is 0.
Range parse_range(const std::string& text, std::int64_t default_points);

struct CommandSpec {
  std::string command;
  OutputFormat format = OutputFormat::csv;
  /// Empty for standard output.
  std::string output;

  double coupling_ratio = 1.0;
  /// When set, the coupling ratio comes from these and tables gain SI columns.
  std::optional<PhysicalParams> physical;

  // bipartite-visibility
  double r_min = 1e-3;
  double r_max = 1e3;
  std::int64_t points = 200;

  // spectrum, partition-scan, visibility-vs-n
  std::int64_t n_particles = 2;
  std::int64_t blocks = 0;  // 0: one block per particle
  std::int64_t levels = 10;
  std::int64_t n_min = 1;
  std::int64_t n_max = 1000;

  // wavefunction-grid
  std::string kind = "standard";
  std::vector<std::int64_t> quanta{0, 0};
  double x_min = -4.0;
  double x_max = 4.0;
  std::int64_t grid_points = 81;
  bool normalized = false;

  // mean-n-visibility, thermal-grid
  Range mean_n{0.0, 5.0, 501, false};
  Range temperature{0.01, 100.0, 100, false};
  double tolerance = 1e-12;
  unsigned threads = 1;

  VerificationOptions verify;

  double resolved_coupling_ratio() const;
  /// Throws InvalidArgument for a parameter outside its command's domain.
  void validate() const;
};

/// Table for every command except verify.
Table build_table(const CommandSpec& spec);

Table verification_table(const std::vector<VerificationCheck>& checks);

/// Writes the command's table to spec.output (or `out`) and diagnostics to
/// `err`; returns an ExitCode.
int execute(const CommandSpec& spec, std::ostream& out, std::ostream& err);

/// Parses the command line into a CommandSpec and executes it. The thread
/// count for grid sweeps is read from OSCENT_THREADS.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace oscent::cli
