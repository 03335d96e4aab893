#include "qce/ao_solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <numeric>

#include "qce/errors.hpp"

namespace qce {

double SolverParams::tau(int k) const { return tau_scale * std::pow(k, tau_exponent); }

double SolverParams::c(int k) const { return c_scale / (rho * std::pow(k, c_exponent)); }

void SolverParams::validate() const {
  if (!(lambda0 > 0.0)) throw ParameterError("lambda0 must be > 0");
  if (!(delta > 1.0)) throw ParameterError("delta must be > 1");
  if (!(rho > 0.0)) throw ParameterError("rho must be > 0");
  if (!(tau_scale > 0.0)) throw ParameterError("tau_scale must be > 0");
  if (!(c_scale >= 0.0)) throw ParameterError("c_scale must be >= 0");
  if (!(inner_tol > 0.0)) throw ParameterError("inner_tol must be > 0");
  if (inner_max_iters < 1 || outer_max_iters < 1)
    throw ParameterError("iteration caps must be >= 1");
  if (!(feasibility_tol >= 0.0)) throw ParameterError("feasibility_tol must be >= 0");
}

SpectralNorm spectral_norm(const Eigen::MatrixXd& A) {
  if (A.size() == 0 || A.isZero(0.0)) throw ParameterError("spectral_norm of a zero matrix");
  // Fixed, non-symmetric start so it is unlikely to be orthogonal to the
  // top right-singular vector.
  Eigen::VectorXd v(A.cols());
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = 1.0 + 0.5 / static_cast<double>(i + 1);
  v.normalize();

  SpectralNorm out;
  double previous = 0.0;
  for (int it = 1; it <= 200; ++it) {
    Eigen::VectorXd w = A.transpose() * (A * v);
    const double lambda = v.dot(w);  // Rayleigh quotient of A^T A
    const double wn = w.norm();
    out.iterations = it;
    out.value = std::sqrt(std::max(lambda, 0.0));
    if (wn == 0.0) {
      // Start vector in the null space; restart along a coordinate axis.
      v.setZero();
      v(it % v.size()) = 1.0;
      continue;
    }
    v = w / wn;
    if (it > 1 && std::abs(lambda - previous) <= 1e-12 * lambda) {
      out.converged = true;
      break;
    }
    previous = lambda;
  }
  return out;
}

double mean_abs(const Eigen::MatrixXd& A) {
  if (A.size() == 0) throw ParameterError("mean_abs of an empty matrix");
  return A.cwiseAbs().mean();
}

SolverParams default_params(const CIMatrix& ci, NormChoice norm) {
  const double a_norm =
      norm == NormChoice::Spectral ? spectral_norm(ci.A).value : ci.A.norm();
  SolverParams p;
  p.lambda0 = 0.001 * ci.M / (8.0 * std::numbers::sqrt2);
  p.delta = 5.0;
  p.rho = std::numbers::sqrt2 / (5.0 * a_norm);
  p.c_scale = 0.03;
  p.c_exponent = 0.25;
  p.tau_scale = 6.0 / (5.0 * std::numbers::sqrt2) * mean_abs(ci.A);
  p.tau_exponent = 0.5;
  p.inner_tol = 1e-2;
  p.inner_max_iters = 500;
  p.outer_max_iters = 50;
  return p;
}

Eigen::VectorXd project_simplex(const Eigen::VectorXd& y) {
  if (y.size() == 0) throw ParameterError("project_simplex of an empty vector");
  if (!y.allFinite()) throw ParameterError("project_simplex input must be finite");
  std::vector<double> sorted(y.data(), y.data() + y.size());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (std::size_t j = 0; j < sorted.size(); ++j) {
    cumulative += sorted[j];
    const double candidate = (cumulative - 1.0) / static_cast<double>(j + 1);
    if (sorted[j] - candidate > 0.0) theta = candidate;
  }
  Eigen::VectorXd out = (y.array() - theta).max(0.0);
  // Renormalize away rounding in theta.
  const double total = out.sum();
  if (total > 0.0) out /= total;
  return out;
}

double penalty_objective(const CIMatrix& ci, const Eigen::VectorXd& x, double lambda) {
  const double value = ci_objective(ci, x).value;
  double norms = 0.0;
  for (Eigen::Index i = 0; i < x.size() / 2; ++i) norms += std::hypot(x(2 * i), x(2 * i + 1));
  return value - lambda * norms;
}

double lambda_threshold(const CIMatrix& ci, int L) {
  validate_quantization_level(L);
  const double angle = std::numbers::pi / L;
  return std::sin(angle) / (1.0 - std::cos(angle)) * ci.A.rowwise().norm().maxCoeff();
}

AoResult ao_solve(const CIMatrix& ci, int L, double lambda, const Eigen::VectorXd& x0,
                  const Eigen::VectorXd& y0, const SolverParams& params,
                  const AoObserver& observer) {
  validate_quantization_level(L);
  if (!(lambda >= 0.0)) throw ParameterError("lambda must be >= 0");
  if (!(params.tau_scale > 0.0) || !(params.rho > 0.0) || params.inner_max_iters < 1)
    throw ParameterError("invalid solver parameters");
  const Eigen::Index dim = ci.A.cols();
  const Eigen::Index rows = ci.A.rows();
  if (x0.size() != dim) throw ParameterError("x0 has wrong dimension");
  if (y0.size() != 0 && y0.size() != rows) throw ParameterError("y0 has wrong dimension");

  AoResult res;
  res.x = x0;
  res.y = y0.size() == 0 ? Eigen::VectorXd::Constant(rows, 1.0 / static_cast<double>(rows))
                         : y0;
  Eigen::VectorXd next(dim);

  for (int k = 1; k <= params.inner_max_iters; ++k) {
    const double tau = params.tau(k);
    const double beta = 2.0 * lambda / tau;
    const Eigen::VectorXd gradient = ci.A.transpose() * res.y;
    for (Eigen::Index i = 0; i < dim / 2; ++i) {
      const Block2 target{res.x(2 * i) - gradient(2 * i) / tau,
                          res.x(2 * i + 1) - gradient(2 * i + 1) / tau};
      SubproblemInfo info;
      const Block2 block = solve_2d_subproblem(target, beta, L, &info, params.root_residual_tol);
      next(2 * i) = block.u;
      next(2 * i + 1) = block.v;
      if (info.used_fallback) ++res.trace.fallback_roots;
    }
    const double rho_c = params.rho * params.c(k);
    res.y = project_simplex(res.y + params.rho * (ci.A * next) - rho_c * res.y);

    const double step = (next - res.x).norm();
    res.x = next;
    if (!res.x.allFinite() || !res.y.allFinite())
      throw SolverError("non-finite iterate in ao_solve (k = " + std::to_string(k) + ")");
    res.trace.iterations = k;
    res.trace.objective_history.push_back(penalty_objective(ci, res.x, lambda));
    if (observer) observer(k, res.x, res.y);

    if (params.stop_on_feasible && is_qce_feasible(res.x, L, params.feasibility_tol)) {
      res.trace.feasible = true;
      break;
    }
    if (step < params.inner_tol) {
      res.trace.converged = true;
      break;
    }
  }
  return res;
}

HomotopyResult homotopy_solve(const CIMatrix& ci, int L, const SolverParams& params) {
  params.validate();
  validate_quantization_level(L);
  const auto start = std::chrono::steady_clock::now();

  const Eigen::Index rows = ci.A.rows();
  const Eigen::VectorXd uniform = Eigen::VectorXd::Constant(rows, 1.0 / static_cast<double>(rows));
  HomotopyResult out;
  out.x = Eigen::VectorXd::Zero(ci.A.cols());
  out.y = uniform;
  SolveTrace& trace = out.trace;

  double lambda = params.lambda0;
  for (int t = 0; t < params.outer_max_iters; ++t) {
    AoResult stage =
        ao_solve(ci, L, lambda, out.x, params.warm_start_y ? out.y : uniform, params);
    out.x = std::move(stage.x);
    out.y = std::move(stage.y);
    trace.outer_iterations = t + 1;
    trace.inner_iterations.push_back(stage.trace.iterations);
    trace.lambdas.push_back(lambda);
    trace.objective_history.push_back(ci_objective(ci, out.x).value);
    trace.fallback_roots += stage.trace.fallback_roots;
    trace.final_lambda = lambda;
    if (is_qce_feasible(out.x, L, params.feasibility_tol)) {
      trace.feasible = true;
      break;
    }
    lambda *= params.delta;
  }
  trace.hit_outer_cap = !trace.feasible;

  for (Eigen::Index i = 0; i < out.x.size() / 2; ++i) {
    const Block2 v = nearest_vertex({out.x(2 * i), out.x(2 * i + 1)}, L).vertex;
    out.x(2 * i) = v.u;
    out.x(2 * i + 1) = v.v;
  }
  trace.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace qce
