#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace oscent::cli {

struct VerificationCheck {
  std::string name;
  double expected = 0.0;
  double computed = 0.0;
  double tolerance = 0.0;
  /// Tolerance applies to |computed - expected| / |expected| instead of the
  /// absolute difference.
  bool relative = false;
  bool passed = false;
};

struct VerificationOptions {
  /// Largest per-particle basis size; smaller sizes are used when d^N would
  /// exceed max_rows.
  int max_basis_dim = 30;
  std::int64_t max_rows = 20'000;
  /// Restricts the oracle checks to N = 2, 3 and R = 1.
  bool quick = false;
};

/// Closed forms against the truncated-basis oracle, the alternating
/// separability solver, brute-force distribution search, and thermal series
/// identities.
std::vector<VerificationCheck> run_verification_suite(const VerificationOptions& options);

}  // namespace oscent::cli
