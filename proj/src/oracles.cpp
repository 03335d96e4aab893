#include "qce/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "qce/errors.hpp"

namespace qce::oracle {

HullGrid::HullGrid(int L, int points_per_axis) : L_(L) {
  validate_quantization_level(L);
  if (points_per_axis < 2) throw ParameterError("grid needs at least 2 points per axis");
  spacing_ = 2.0 / (points_per_axis - 1);
  const double c = std::cos(std::numbers::pi / L);
  std::vector<double> nu(L), nv(L);
  for (int j = 0; j < L; ++j) {
    nu[j] = std::cos(2.0 * std::numbers::pi * j / L);
    nv[j] = std::sin(2.0 * std::numbers::pi * j / L);
  }
  for (int a = 0; a < points_per_axis; ++a) {
    const double u = -1.0 + a * spacing_;
    for (int b = 0; b < points_per_axis; ++b) {
      const double v = -1.0 + b * spacing_;
      bool inside = true;
      for (int j = 0; j < L && inside; ++j) inside = nu[j] * u + nv[j] * v <= c;
      if (!inside) continue;
      u_.push_back(static_cast<float>(u));
      v_.push_back(static_cast<float>(v));
      norm_.push_back(static_cast<float>(std::hypot(u, v)));
      sq_.push_back(static_cast<float>(u * u + v * v));
    }
  }
}

HullGrid::Minimum HullGrid::min_subproblem(Block2 target, double beta) const {
  // (u-ut)^2 + (v-vt)^2 - beta n = sq - 2 ut u - 2 vt v - beta n + |t|^2
  const float a = static_cast<float>(-2.0 * target.u);
  const float b = static_cast<float>(-2.0 * target.v);
  const float g = static_cast<float>(-beta);
  const std::size_t n = u_.size();
  const float* u = u_.data();
  const float* v = v_.data();
  const float* nr = norm_.data();
  const float* sq = sq_.data();

  float best = std::numeric_limits<float>::infinity();
  for (std::size_t i = 0; i < n; ++i) best = std::min(best, sq[i] + a * u[i] + b * v[i] + g * nr[i]);
  std::size_t arg = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (sq[i] + a * u[i] + b * v[i] + g * nr[i] == best) {
      arg = i;
      break;
    }
  // Re-evaluate the winner in double precision.
  const Block2 p{u_[arg], v_[arg]};
  const double du = p.u - target.u, dv = p.v - target.v;
  return {du * du + dv * dv - beta * std::hypot(p.u, p.v), p};
}

HullGrid::Minimum HullGrid::min_penalized(const Eigen::MatrixXd& A, double lambda) const {
  if (A.cols() != 2) throw ParameterError("min_penalized expects a single antenna");
  Minimum best{std::numeric_limits<double>::infinity(), {}};
  for (std::size_t i = 0; i < u_.size(); ++i) {
    const double u = u_[i], v = v_[i];
    const double value = (A.col(0) * u + A.col(1) * v).maxCoeff() - lambda * std::hypot(u, v);
    if (value < best.value) best = {value, {u, v}};
  }
  return best;
}

double subproblem_lipschitz(Block2 target, double beta) {
  return 2.0 * (1.0 + std::hypot(target.u, target.v)) + beta;
}

int scan_detect(Complex y, int M) {
  const auto points = psk_constellation(M);
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (int m = 0; m < M; ++m) {
    double d = std::abs(std::arg(y) - std::arg(points[m]));
    d = std::min(d, 2.0 * std::numbers::pi - d);
    if (d < best_d) {
      best_d = d;
      best = m;
    }
  }
  return best;
}

int scan_nearest_vertex(Block2 p, int L) {
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (int l = 0; l < L; ++l) {
    const double angle = (2.0 * l + 1.0) * std::numbers::pi / L;
    const double d = std::hypot(p.u - std::cos(angle), p.v - std::sin(angle));
    if (d < best_d) {
      best_d = d;
      best = l;
    }
  }
  return best;
}

double outer_derivative(double v_rot, double beta, int L, double r) {
  const double c = std::cos(std::numbers::pi / L);
  const long double rr = r, cc = c;
  const long double g = std::sqrt((rr - cc) * (rr + cc));
  return static_cast<double>(2.0L * rr - 2.0L * std::abs(v_rot) * rr / g - beta);
}

std::vector<double> scan_derivative_roots(double v_rot, double beta, int L, double r_max,
                                          int samples) {
  const double c = std::cos(std::numbers::pi / L);
  std::vector<double> roots;
  const double step = (r_max - c) / samples;
  double prev_r = c + step * 1e-9;
  double prev = outer_derivative(v_rot, beta, L, prev_r);
  for (int i = 1; i <= samples; ++i) {
    const double r = c + step * i;
    const double d = outer_derivative(v_rot, beta, L, r);
    if ((prev < 0.0 && d >= 0.0) || (prev > 0.0 && d <= 0.0)) roots.push_back(0.5 * (prev_r + r));
    prev = d;
    prev_r = r;
  }
  return roots;
}

double simplex_kkt_violation(const Eigen::VectorXd& y, const Eigen::VectorXd& x) {
  double worst = std::abs(x.sum() - 1.0);
  worst = std::max(worst, std::max(0.0, -x.minCoeff()));
  // theta from the support
  double theta = 0.0;
  int support = 0;
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (x(i) > 0.0) {
      theta += y(i) - x(i);
      ++support;
    }
  if (support == 0) return std::numeric_limits<double>::infinity();
  theta /= support;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x(i) > 0.0)
      worst = std::max(worst, std::abs(y(i) - theta - x(i)));
    else
      worst = std::max(worst, std::max(0.0, y(i) - theta));
  }
  return worst;
}

Eigen::VectorXd simplex_by_bisection(const Eigen::VectorXd& y) {
  double lo = y.minCoeff() - 1.0, hi = y.maxCoeff();
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double total = (y.array() - mid).max(0.0).sum();
    (total > 1.0 ? lo : hi) = mid;
  }
  return (y.array() - 0.5 * (lo + hi)).max(0.0);
}

}  // namespace qce::oracle
