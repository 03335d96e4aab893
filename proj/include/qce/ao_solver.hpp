#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "qce/ci_transform.hpp"
#include "qce/qce_geometry.hpp"

namespace qce {

enum class NormChoice { Spectral, Frobenius };

/// Tuning for the AO inner solver and the homotopy outer loop. The
/// per-iteration schedules (k counts from 1 inside each AO call) are
///   tau_k = tau_scale * k^tau_exponent
///   c_k   = c_scale / (rho * k^c_exponent)
struct SolverParams {
  double lambda0 = 0.0;
  double delta = 5.0;
  double rho = 0.0;
  double c_scale = 0.03;
  double c_exponent = 0.25;
  double tau_scale = 0.0;
  double tau_exponent = 0.5;
  double inner_tol = 1e-2;
  int inner_max_iters = 500;
  int outer_max_iters = 50;
  double feasibility_tol = 1e-9;
  double root_residual_tol = kRootResidualTolerance;
  bool warm_start_y = false;
  // Stop an AO call as soon as every block is a QCE vertex.
  bool stop_on_feasible = true;

  double tau(int k) const;
  double c(int k) const;
  void validate() const;
};

struct SpectralNorm {
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Largest singular value by power iteration on A^T A from a fixed start
/// vector; stops when successive estimates agree to 1e-12 relative or after
/// 200 iterations (converged = false).
SpectralNorm spectral_norm(const Eigen::MatrixXd& A);
double mean_abs(const Eigen::MatrixXd& A);

SolverParams default_params(const CIMatrix& ci, NormChoice norm = NormChoice::Spectral);

/// Euclidean projection onto {y >= 0, sum y = 1}.
Eigen::VectorXd project_simplex(const Eigen::VectorXd& y);

/// max_m a_m^T x - lambda sum_i ||x_i||
double penalty_objective(const CIMatrix& ci, const Eigen::VectorXd& x, double lambda);

/// sin(pi/L) / (1 - cos(pi/L)) * max_m ||a_m||; above this the penalized and
/// discrete problems share their optimal solutions.
double lambda_threshold(const CIMatrix& ci, int L);

struct AoTrace {
  int iterations = 0;
  bool feasible = false;      // stopped because every block is a vertex
  bool converged = false;     // stopped on successive-iterate distance
  std::vector<double> objective_history;  // penalty objective after each x-step
  int fallback_roots = 0;
};

struct AoResult {
  Eigen::VectorXd x;
  Eigen::VectorXd y;
  AoTrace trace;
};

/// Called after every (x, y) update with the 1-based iteration index.
using AoObserver =
    std::function<void(int k, const Eigen::VectorXd& x, const Eigen::VectorXd& y)>;

/// Alternating optimization for min_x max_{y in simplex} y^T A x - lambda sum ||x_i||
/// over conv(X_L)^N. Each x-step solves N independent 2-D subproblems with
/// target x_i - (A^T y)_i / tau_k and beta = 2 lambda / tau_k; the y-step is a
/// projected, regularized ascent step.
AoResult ao_solve(const CIMatrix& ci, int L, double lambda, const Eigen::VectorXd& x0,
                  const Eigen::VectorXd& y0, const SolverParams& params,
                  const AoObserver& observer = {});

struct SolveTrace {
  int outer_iterations = 0;
  std::vector<int> inner_iterations;
  std::vector<double> lambdas;            // lambda used by each stage
  std::vector<double> objective_history;  // ci objective at the end of each stage
  double final_lambda = 0.0;
  bool feasible = false;
  bool hit_outer_cap = false;  // cap reached; x was quantized to nearest vertices
  int fallback_roots = 0;
  double wall_ms = 0.0;
};

struct HomotopyResult {
  Eigen::VectorXd x;
  Eigen::VectorXd y;
  SolveTrace trace;
};

/// Penalty homotopy: run AO at lambda0, lambda0 delta, lambda0 delta^2, ...
/// from x = 0, warm starting x (and y if requested) each stage, until the
/// iterate is QCE-feasible.
/// The returned blocks are exact vertices.
HomotopyResult homotopy_solve(const CIMatrix& ci, int L, const SolverParams& params);

}  // namespace qce
