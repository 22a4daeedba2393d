#pragma once

#include <vector>

namespace oscent {

inline constexpr int kDefaultMaxHermiteOrder = 512;

/// Normalized Hermite function h^(n)(xi), evaluated with the ascending
/// three-term recurrence. The Gaussian envelope is carried as a separate
/// exponent so large |xi| neither overflows nor loses the polynomial factor.
/// Throws InvalidArgument for n < 0 or n > max_order.
double hermite_function(int n, double xi, int max_order = kDefaultMaxHermiteOrder);

/// h^(0)(xi), ..., h^(n_max)(xi) in one pass.
std::vector<double> hermite_functions(int n_max, double xi, int max_order = kDefaultMaxHermiteOrder);

}  // namespace oscent
