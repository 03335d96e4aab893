#pragma once

// Brute-force reference computations. Nothing here calls into the solver
// code paths it is used to check.

#include <vector>

#include <Eigen/Dense>

#include "qce/core_model.hpp"
#include "qce/qce_geometry.hpp"

namespace qce::oracle {

/// Uniform grid over [-1, 1]^2 restricted to conv(X_L), stored in float for
/// throughput. Hull membership uses the half-plane description directly.
class HullGrid {
 public:
  HullGrid(int L, int points_per_axis);

  int level() const { return L_; }
  double spacing() const { return spacing_; }
  std::size_t size() const { return u_.size(); }

  struct Minimum {
    double value;
    Block2 point;
  };

  /// min over the grid of (u - ut)^2 + (v - vt)^2 - beta sqrt(u^2 + v^2)
  Minimum min_subproblem(Block2 target, double beta) const;

  /// min over the grid of max_m a_m^T x - lambda ||x|| for a 1-antenna A
  /// (rows x 2).
  Minimum min_penalized(const Eigen::MatrixXd& A, double lambda) const;

 private:
  int L_;
  double spacing_;
  std::vector<float> u_, v_, norm_, sq_;
};

/// Lipschitz bound of the 2-D subproblem objective on the unit disk.
double subproblem_lipschitz(Block2 target, double beta);

/// Argmin of angular distance between arg(y) and each PSK point (scan).
int scan_detect(Complex y, int M);

/// Vertex closest in Euclidean distance by scanning all L, lower index on ties.
int scan_nearest_vertex(Block2 p, int L);

/// h'(r) = 2r - 2|v| r / sqrt(r^2 - c^2) - beta, c = cos(pi/L), r > c.
double outer_derivative(double v_rot, double beta, int L, double r);

/// Sign changes of h' on a uniform grid of `samples` points in (c, r_max];
/// each is returned as the bracket midpoint.
std::vector<double> scan_derivative_roots(double v_rot, double beta, int L, double r_max,
                                          int samples);

/// Largest KKT violation of x as the simplex projection of y: x must be
/// y - theta on its support, y - theta <= 0 off it, and sum to 1.
double simplex_kkt_violation(const Eigen::VectorXd& y, const Eigen::VectorXd& x);

/// Projection onto the probability simplex by bisection on the threshold.
Eigen::VectorXd simplex_by_bisection(const Eigen::VectorXd& y);

}  // namespace qce::oracle
