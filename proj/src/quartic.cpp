#include "qce/quartic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qce {

namespace {

double polish_cubic(double x, double a, double b, double c) {
  for (int it = 0; it < 3; ++it) {
    const double f = ((x + a) * x + b) * x + c;
    const double df = (3.0 * x + 2.0 * a) * x + b;
    if (df == 0.0) break;
    const double step = f / df;
    if (!std::isfinite(step)) break;
    x -= step;
  }
  return x;
}

double polish_quartic(double x, double c4, double c3, double c2, double c1, double c0) {
  double best = x;
  double best_f = std::abs((((c4 * x + c3) * x + c2) * x + c1) * x + c0);
  for (int it = 0; it < 4; ++it) {
    const double df = ((4.0 * c4 * x + 3.0 * c3) * x + 2.0 * c2) * x + c1;
    const double f = (((c4 * x + c3) * x + c2) * x + c1) * x + c0;
    if (df == 0.0) break;
    const double next = x - f / df;
    if (!std::isfinite(next)) break;
    x = next;
    const double fx = std::abs((((c4 * x + c3) * x + c2) * x + c1) * x + c0);
    if (fx < best_f) {
      best_f = fx;
      best = x;
    }
  }
  return best;
}

void push_quadratic_roots(double b, double c, double shift, std::vector<double>& out) {
  // x^2 + b x + c = 0, roots shifted by `shift`
  const double disc = b * b - 4.0 * c;
  if (disc < 0.0) {
    // Near-double roots can land slightly negative after rounding.
    if (disc > -1e-12 * std::max(1.0, b * b)) out.push_back(-b / 2.0 + shift);
    return;
  }
  const double sq = std::sqrt(disc);
  const double q = -0.5 * (b + std::copysign(sq, b));
  if (q != 0.0) {
    out.push_back(q + shift);
    out.push_back(c / q + shift);
  } else {
    out.push_back(shift);
    out.push_back(shift);
  }
}

}  // namespace

std::vector<double> real_cubic_roots(double a, double b, double c) {
  // Depress: x = t - a/3, t^3 + p t + q = 0.
  const double a3 = a / 3.0;
  const double p = b - a * a3;
  const double q = 2.0 * a3 * a3 * a3 - a3 * b + c;
  std::vector<double> roots;
  const double disc = (q * q) / 4.0 + (p * p * p) / 27.0;
  if (disc > 0.0) {
    const double sq = std::sqrt(disc);
    const double u = std::cbrt(-q / 2.0 + sq);
    const double v = std::cbrt(-q / 2.0 - sq);
    roots.push_back(u + v - a3);
  } else if (p == 0.0) {
    roots.push_back(-a3);
  } else {
    const double r = 2.0 * std::sqrt(-p / 3.0);
    const double arg = std::clamp(3.0 * q / (p * r), -1.0, 1.0);
    const double phi = std::acos(arg) / 3.0;
    for (int k = 0; k < 3; ++k)
      roots.push_back(r * std::cos(phi - 2.0 * std::numbers::pi * k / 3.0) - a3);
  }
  for (auto& x : roots) x = polish_cubic(x, a, b, c);
  std::sort(roots.begin(), roots.end());
  return roots;
}

std::vector<double> real_quartic_roots(double c4, double c3, double c2, double c1,
                                       double c0) {
  const double a = c3 / c4, b = c2 / c4, c = c1 / c4, d = c0 / c4;
  // Depress: x = y - a/4, y^4 + p y^2 + q y + r = 0.
  const double shift = -a / 4.0;
  const double a2 = a * a;
  const double p = b - 3.0 * a2 / 8.0;
  const double q = c - a * b / 2.0 + a2 * a / 8.0;
  const double r = d - a * c / 4.0 + a2 * b / 16.0 - 3.0 * a2 * a2 / 256.0;

  std::vector<double> roots;
  const double scale = std::max({1.0, std::abs(p), std::abs(r)});
  if (std::abs(q) <= 1e-14 * scale) {
    // Biquadratic in y^2.
    std::vector<double> squares;
    push_quadratic_roots(p, r, 0.0, squares);
    for (double z : squares) {
      if (z >= 0.0) {
        const double y = std::sqrt(z);
        roots.push_back(y + shift);
        roots.push_back(-y + shift);
      } else if (z > -1e-14 * scale) {
        roots.push_back(shift);
      }
    }
  } else {
    // (y^2 + p/2 + m)^2 = 2m y^2 - q y + m^2 + m p + p^2/4 - r; the right side
    // is a perfect square when m solves the resolvent cubic
    // m^3 + p m^2 + (p^2/4 - r) m - q^2/8 = 0, which has a positive root.
    const auto resolvent = real_cubic_roots(p, p * p / 4.0 - r, -q * q / 8.0);
    const double m = resolvent.back();
    if (m > 0.0) {
      const double s = std::sqrt(2.0 * m);
      push_quadratic_roots(s, p / 2.0 + m - q / (2.0 * s), shift, roots);
      push_quadratic_roots(-s, p / 2.0 + m + q / (2.0 * s), shift, roots);
    }
  }
  for (auto& x : roots) x = polish_quartic(x, c4, c3, c2, c1, c0);
  std::sort(roots.begin(), roots.end());
  return roots;
}

}  // namespace qce
