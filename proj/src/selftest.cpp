#include "qce/selftest.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <string>

#include "qce/ao_solver.hpp"
#include "qce/baselines.hpp"
#include "qce/ci_transform.hpp"
#include "qce/oracles.hpp"

namespace qce {

namespace {

constexpr std::uint64_t kSeed = 20240917;

bool report(std::ostream& out, const std::string& name, bool ok, const std::string& detail) {
  out << (ok ? "[PASS] " : "[FAIL] ") << name << ": " << detail << '\n';
  return ok;
}

bool subproblem_vs_grid(std::ostream& out) {
  Rng rng(derive_seed(kSeed, 1));
  int failures = 0;
  const int draws = 200;
  const int levels[] = {4, 8, 16, 32};
  for (int L : levels) {
    const oracle::HullGrid grid(L, 401);
    for (int i = 0; i < draws / 4; ++i) {
      const Block2 target{-3.0 + 6.0 * rng.uniform(), -3.0 + 6.0 * rng.uniform()};
      const double beta = 4.0 * rng.uniform();
      const Block2 x = solve_2d_subproblem(target, beta, L);
      const auto ref = grid.min_subproblem(target, beta);
      const double tol = 2.0 * grid.spacing() * oracle::subproblem_lipschitz(target, beta);
      if (subproblem_objective(x, target, beta) > ref.value + tol || !in_qce_hull(x, L))
        ++failures;
    }
  }
  return report(out, "2-D subproblem vs grid", failures == 0,
                std::to_string(draws - failures) + "/" + std::to_string(draws));
}

bool quartic_residuals(std::ostream& out) {
  Rng rng(derive_seed(kSeed, 2));
  const int draws = 2000;
  int bad = 0, fallbacks = 0;
  for (int i = 0; i < draws; ++i) {
    const int L = 4 << (i % 4);
    const double u = 0.05 + 3.0 * rng.uniform();
    const double v = (2.0 * rng.uniform() - 1.0) * u * std::tan(std::numbers::pi / L);
    const double beta = 4.0 * rng.uniform();
    const auto root = quartic_stationary_root(u, v, beta, L);
    if (root.used_fallback) ++fallbacks;
    if (root.radius && std::abs(oracle::outer_derivative(v, beta, L, *root.radius)) > 1e-7) ++bad;
  }
  return report(out, "quartic stationary root", bad == 0,
                std::to_string(bad) + " residual failures, " + std::to_string(fallbacks) +
                    " fallbacks in " + std::to_string(draws));
}

bool simplex_vs_kkt(std::ostream& out) {
  Rng rng(derive_seed(kSeed, 3));
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    Eigen::VectorXd y(1 + i % 12);
    for (auto& e : y) e = 4.0 * rng.gaussian();
    const Eigen::VectorXd x = project_simplex(y);
    worst = std::max({worst, oracle::simplex_kkt_violation(y, x),
                      (x - oracle::simplex_by_bisection(y)).cwiseAbs().maxCoeff()});
  }
  return report(out, "simplex projection vs KKT", worst <= 1e-9,
                "worst violation " + std::to_string(worst));
}

bool homotopy_vs_exhaustive(std::ostream& out) {
  const int instances = 30;
  int below_optimum = 0, infeasible = 0, optimal = 0;
  for (int i = 0; i < instances; ++i) {
    const auto inst = sample_instance(2, 4, 4, 4, 1.0, derive_seed(kSeed + 4, i));
    const auto ci = build_A(inst);
    const auto best = exhaustive_oracle(ci, 4);
    const auto sol = proposed_solve(ci, 4, default_params(ci));
    if (!is_qce_feasible(sol.x, 4, 0.0)) ++infeasible;
    if (sol.objective < best.objective - 1e-12) ++below_optimum;
    if (sol.objective <= best.objective + 1e-12) ++optimal;
  }
  return report(out, "homotopy vs exhaustive", infeasible == 0 && below_optimum == 0,
                std::to_string(optimal) + "/" + std::to_string(instances) +
                    " optimal, all feasible = " + (infeasible == 0 ? "yes" : "no"));
}

bool decomposition_identity(std::ostream& out) {
  Rng rng(derive_seed(kSeed, 5));
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const auto inst = sample_instance(1 + i % 4, 2 + i % 6, 4 << (i % 3), 8, 1.0 + i, derive_seed(kSeed + 5, i));
    const auto ci = build_A(inst);
    Eigen::VectorXd x(ci.A.cols());
    for (auto& e : x) e = rng.gaussian();
    const Eigen::VectorXcd y = std::sqrt(inst.total_power / inst.antennas()) * inst.channel *
                               real_to_complex(x);
    const Eigen::VectorXd ax = ci.A * x;
    const auto points = psk_constellation(inst.M);
    for (int k = 0; k < inst.users(); ++k) {
      const auto alpha = decompose_alpha(y(k), points[inst.symbols[k]], inst.M);
      worst = std::max({worst, std::abs(ax(2 * k) + alpha.alpha_a),
                        std::abs(ax(2 * k + 1) + alpha.alpha_b)});
    }
  }
  return report(out, "symbol-scaling identity", worst <= 1e-9,
                "worst error " + std::to_string(worst));
}

}  // namespace

bool run_selftest(std::ostream& out) {
  bool ok = true;
  ok &= subproblem_vs_grid(out);
  ok &= quartic_residuals(out);
  ok &= simplex_vs_kkt(out);
  ok &= homotopy_vs_exhaustive(out);
  ok &= decomposition_identity(out);
  out << (ok ? "selftest passed" : "selftest FAILED") << '\n';
  return ok;
}

}  // namespace qce
