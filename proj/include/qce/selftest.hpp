#pragma once

#include <iosfwd>

namespace qce {

/// Reduced-size oracle equivalence suites (2-D subproblem vs grid, quartic
/// residuals, simplex projection vs KKT, homotopy vs exhaustive search,
/// symbol-scaling identity). Prints one line per suite; true if all pass.
bool run_selftest(std::ostream& out);

}  // namespace qce
