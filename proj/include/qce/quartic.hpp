#pragma once

#include <vector>

namespace qce {

/// Real roots of c4 x^4 + c3 x^3 + c2 x^2 + c1 x + c0 (c4 != 0) by Ferrari's
/// method, each polished with Newton steps on the polynomial. Repeated roots
/// may be reported once or twice. Sorted ascending.
std::vector<double> real_quartic_roots(double c4, double c3, double c2, double c1,
                                       double c0);

/// Real roots of x^3 + a x^2 + b x + c, sorted ascending.
std::vector<double> real_cubic_roots(double a, double b, double c);

}  // namespace qce
