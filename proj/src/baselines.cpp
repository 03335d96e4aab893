#include "qce/baselines.hpp"

#include <chrono>
#include <cmath>

#include "qce/errors.hpp"

namespace qce {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

void fill_qce_fields(PrecodeSolution& sol, const CIMatrix& ci) {
  const auto obj = ci_objective(ci, sol.x);
  sol.objective = obj.value;
  sol.margin = obj.margin;
  sol.t = real_to_complex(sol.x);
}

long long checked_power(int base, int exponent) {
  long long total = 1;
  for (int i = 0; i < exponent; ++i) {
    total *= base;
    if (total > kExhaustiveLimit)
      throw ParameterError("exhaustive search over more than 1e6 assignments refused");
  }
  return total;
}

}  // namespace

std::string_view algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::Proposed:
      return "proposed";
    case Algorithm::Msm:
      return "msm";
    case Algorithm::Zf:
      return "zf";
    case Algorithm::Exhaustive:
      return "exhaustive";
  }
  return "unknown";
}

Algorithm parse_algorithm(std::string_view name) {
  if (name == "proposed") return Algorithm::Proposed;
  if (name == "msm") return Algorithm::Msm;
  if (name == "zf") return Algorithm::Zf;
  if (name == "exhaustive") return Algorithm::Exhaustive;
  throw ParameterError("unknown algorithm '" + std::string(name) + "'");
}

SolverParams msm_default_params(const CIMatrix& ci, NormChoice norm) {
  SolverParams p = default_params(ci, norm);
  p.inner_tol = kMsmInnerTol;
  p.inner_max_iters = kMsmInnerMaxIters;
  return p;
}

PrecodeSolution msm_solve(const CIMatrix& ci, int L, const SolverParams& params) {
  const auto start = Clock::now();
  SolverParams relaxed = params;
  relaxed.stop_on_feasible = false;
  const Eigen::VectorXd x0 = Eigen::VectorXd::Zero(ci.A.cols());
  const AoResult res = ao_solve(ci, L, 0.0, x0, Eigen::VectorXd(), relaxed);

  PrecodeSolution sol;
  sol.algorithm = Algorithm::Msm;
  sol.relaxed_objective = ci_objective(ci, res.x).value;
  sol.x = res.x;
  for (Eigen::Index i = 0; i < sol.x.size() / 2; ++i) {
    const Block2 v = nearest_vertex({sol.x(2 * i), sol.x(2 * i + 1)}, L).vertex;
    sol.x(2 * i) = v.u;
    sol.x(2 * i + 1) = v.v;
  }
  sol.feasible = true;
  fill_qce_fields(sol, ci);
  sol.solve_ms = elapsed_ms(start);
  return sol;
}

PrecodeSolution proposed_solve(const CIMatrix& ci, int L, const SolverParams& params) {
  const auto start = Clock::now();
  const HomotopyResult res = homotopy_solve(ci, L, params);
  PrecodeSolution sol;
  sol.algorithm = Algorithm::Proposed;
  sol.x = res.x;
  sol.feasible = is_qce_feasible(sol.x, L, 0.0);
  fill_qce_fields(sol, ci);
  sol.relaxed_objective = sol.objective;
  sol.solve_ms = elapsed_ms(start);
  return sol;
}

Eigen::VectorXcd zf_precoder(const Eigen::MatrixXcd& H, const Eigen::VectorXcd& s,
                             double total_power) {
  if (H.rows() != s.size()) throw ParameterError("symbol vector size mismatch");
  if (H.rows() > H.cols()) throw ParameterError("zero forcing needs K <= N");
  if (!(total_power > 0.0)) throw ParameterError("total power must be positive");
  const Eigen::MatrixXcd gram = H * H.adjoint();
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(gram, Eigen::EigenvaluesOnly);
  const double largest = eig.eigenvalues().maxCoeff();
  const double smallest = eig.eigenvalues().minCoeff();
  if (!(smallest > 0.0) || largest / smallest > 1e12)
    throw DegenerateChannelError("H H^H is numerically singular");
  const Eigen::LLT<Eigen::MatrixXcd> llt(gram);
  if (llt.info() != Eigen::Success) throw DegenerateChannelError("Cholesky of H H^H failed");
  const Eigen::VectorXcd t = H.adjoint() * llt.solve(s);
  return t * (std::sqrt(total_power) / t.norm());
}

std::vector<double> vertex_objectives(const CIMatrix& ci, int L) {
  const int N = ci.antennas();
  const long long total = checked_power(L, N);
  const auto vertices = qce_vertices(L);

  // contribution[i][l] = A_block(i) * vertex l
  std::vector<std::vector<Eigen::VectorXd>> contribution(N);
  for (int i = 0; i < N; ++i)
    for (int l = 0; l < L; ++l)
      contribution[i].push_back(ci.A.col(2 * i) * vertices[l].u +
                                ci.A.col(2 * i + 1) * vertices[l].v);

  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(total));
  std::vector<int> digits(N, 0);
  Eigen::VectorXd ax(ci.A.rows());
  for (long long n = 0; n < total; ++n) {
    ax.setZero();
    for (int i = 0; i < N; ++i) ax += contribution[i][digits[i]];
    out.push_back(ax.maxCoeff());
    for (int i = N - 1; i >= 0; --i) {
      if (++digits[i] < L) break;
      digits[i] = 0;
    }
  }
  return out;
}

PrecodeSolution exhaustive_oracle(const CIMatrix& ci, int L) {
  const auto start = Clock::now();
  const int N = ci.antennas();
  const auto objectives = vertex_objectives(ci, L);
  std::size_t best = 0;
  for (std::size_t n = 1; n < objectives.size(); ++n)
    if (objectives[n] < objectives[best]) best = n;

  PrecodeSolution sol;
  sol.algorithm = Algorithm::Exhaustive;
  sol.x.resize(2 * N);
  auto rest = static_cast<long long>(best);
  for (int i = N - 1; i >= 0; --i) {
    const Block2 v = qce_vertex(L, static_cast<int>(rest % L));
    rest /= L;
    sol.x(2 * i) = v.u;
    sol.x(2 * i + 1) = v.v;
  }
  sol.feasible = true;
  fill_qce_fields(sol, ci);
  sol.relaxed_objective = sol.objective;
  sol.solve_ms = elapsed_ms(start);
  return sol;
}

}  // namespace qce
