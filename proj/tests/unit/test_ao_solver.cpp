#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qce/ao_solver.hpp"
#include "qce/baselines.hpp"
#include "qce/errors.hpp"
#include "qce/oracles.hpp"

using namespace qce;

namespace {

CIMatrix hand_ci() {
  ProblemInstance p;
  p.channel = Eigen::MatrixXcd::Constant(1, 1, Complex(1, 0));
  p.symbols = {0};
  p.M = 4;
  p.L = 4;
  return build_A(p);
}

}  // namespace

TEST_CASE("simplex projection examples") {
  Eigen::VectorXd a(2), b(2), c(3);
  a << 0.5, 0.5;
  b << 2, 1;
  c << 0.2, 0.3, 0.1;
  CHECK((project_simplex(a) - a).norm() < 1e-15);
  CHECK((project_simplex(b) - Eigen::Vector2d(1, 0)).norm() < 1e-15);
  Eigen::VectorXd want(3);
  want << 0.2 + 0.4 / 3, 0.3 + 0.4 / 3, 0.1 + 0.4 / 3;
  CHECK((project_simplex(c) - want).norm() < 1e-12);
  CHECK(oracle::simplex_kkt_violation(b, project_simplex(b)) < 1e-12);
}

TEST_CASE("simplex projection against bisection") {
  for (int i = 0; i < 200; ++i) {
    Eigen::VectorXd y = 3 * Eigen::VectorXd::Random(1 + i % 20);
    auto p = project_simplex(y);
    CHECK(oracle::simplex_kkt_violation(y, p) < 1e-12);
    CHECK((p - oracle::simplex_by_bisection(y)).lpNorm<Eigen::Infinity>() < 1e-10);
  }
}

TEST_CASE("spectral norm") {
  CHECK(spectral_norm(Eigen::MatrixXd::Identity(2, 2)).value == doctest::Approx(1.0));
  CHECK(spectral_norm(Eigen::Matrix2d{{3, 0}, {0, 1}}).value == doctest::Approx(3.0));
  for (int i = 0; i < 20; ++i) {
    auto ci = build_A(sample_instance(4, 16, 8, 8, 1.0, derive_seed(40, i)));
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(ci.A);
    auto s = spectral_norm(ci.A);
    CHECK(s.value == doctest::Approx(svd.singularValues()(0)).epsilon(1e-8));
  }
}

TEST_CASE("default parameters") {
  auto inst = sample_instance(2, 4, 16, 8, 1.0, 1);
  auto p = default_params(build_A(inst));
  CHECK(p.lambda0 == doctest::Approx(0.016 / (8 * std::sqrt(2.0))).epsilon(1e-12));
  CHECK(p.lambda0 == doctest::Approx(1.4142e-3).epsilon(1e-4));
  CHECK(p.tau(1) / p.tau(4) == doctest::Approx(0.5));
  CHECK(p.c(16) * p.rho == doctest::Approx(0.03 / 2));

  CIMatrix id{Eigen::MatrixXd::Identity(2, 2), 4};
  auto q = default_params(id);
  CHECK(q.rho == doctest::Approx(std::sqrt(2.0) / 5));
  auto f = default_params(id, NormChoice::Frobenius);
  CHECK(f.rho == doctest::Approx(1.0 / 5));

  SolverParams bad = p;
  bad.delta = 1.0;
  CHECK_THROWS_AS(bad.validate(), ParameterError);
}

TEST_CASE("penalty objective and threshold") {
  auto ci = hand_ci();
  Eigen::VectorXd x(2);
  x << std::sqrt(0.5), std::sqrt(0.5);
  CHECK(penalty_objective(ci, Eigen::VectorXd::Zero(2), 0.3) == 0.0);
  CHECK(penalty_objective(ci, x, 0.3) ==
        doctest::Approx(ci_objective(ci, x).value - 0.3).epsilon(1e-14));
  CHECK(lambda_threshold(ci, 4) == doctest::Approx(1 + std::sqrt(2.0)).epsilon(1e-12));
  // sin(pi/L) / (1 - cos(pi/L)) for larger L
  double r8 = lambda_threshold(ci, 8), r16 = lambda_threshold(ci, 16);
  double r32 = lambda_threshold(ci, 32);
  CHECK(r8 == doctest::Approx(5.0273).epsilon(1e-4));
  CHECK(r16 == doctest::Approx(10.1532).epsilon(1e-4));
  CHECK(r32 == doctest::Approx(20.3555).epsilon(1e-4));
}

TEST_CASE("lambda above tau_1 finishes in one step") {
  auto ci = build_A(sample_instance(2, 4, 4, 4, 1.0, 9));
  auto p = default_params(ci);
  auto r = ao_solve(ci, 4, p.tau(1), Eigen::VectorXd::Zero(8), {}, p);
  CHECK(r.trace.iterations == 1);
  CHECK(r.trace.feasible);
  CHECK(is_qce_feasible(r.x, 4, 0.0));
}

TEST_CASE("iterates stay in their sets") {
  auto ci = build_A(sample_instance(3, 8, 8, 8, 1.0, 10));
  auto p = default_params(ci);
  bool ok = true;
  int calls = 0;
  auto obs = [&](int, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    ++calls;
    if (std::abs(y.sum() - 1) > 1e-12 || y.minCoeff() < 0) ok = false;
    for (int i = 0; i < 8; ++i)
      if (!in_qce_hull({x(2 * i), x(2 * i + 1)}, 8)) ok = false;
  };
  auto r = ao_solve(ci, 8, 0.01, Eigen::VectorXd::Zero(16), {}, p, obs);
  CHECK(ok);
  CHECK(calls == r.trace.iterations);
}

TEST_CASE("x-step reduction reproduces the proximal minimizer") {
  // one antenna: y^T A x - lambda ||x|| + tau/2 ||x - x0||^2 minimized on a grid
  oracle::HullGrid grid(8, 801);
  Rng rng(15);
  for (int i = 0; i < 30; ++i) {
    auto ci = build_A(sample_instance(2, 1, 4, 8, 1.0, derive_seed(60, i)));
    Eigen::VectorXd y = project_simplex(Eigen::VectorXd::Random(4));
    Block2 x0{0.4 * rng.uniform() - 0.2, 0.4 * rng.uniform() - 0.2};
    double lambda = 0.3 * rng.uniform(), tau = 0.5 + rng.uniform();
    Eigen::Vector2d g = ci.A.transpose() * y;
    Block2 t{x0.u - g(0) / tau, x0.v - g(1) / tau};
    auto p = solve_2d_subproblem(t, 2 * lambda / tau, 8);

    auto f = [&](double u, double v) {
      return g(0) * u + g(1) * v - lambda * std::hypot(u, v) +
             0.5 * tau * ((u - x0.u) * (u - x0.u) + (v - x0.v) * (v - x0.v));
    };
    double best = 1e300;
    for (int a = 0; a < 801; ++a)
      for (int b = 0; b < 801; ++b) {
        double u = -1 + a * grid.spacing(), v = -1 + b * grid.spacing();
        if (in_qce_hull({u, v}, 8)) best = std::min(best, f(u, v));
      }
    double lip = g.norm() + lambda + tau * 3;
    CHECK(f(p.u, p.v) <= best + 2 * grid.spacing() * lip);
  }
}

TEST_CASE("no penalty smoke run") {
  auto ci = build_A(sample_instance(2, 4, 4, 4, 1.0, 16));
  auto p = default_params(ci);
  p.stop_on_feasible = false;
  auto r = ao_solve(ci, 4, 0.0, Eigen::VectorXd::Zero(8), {}, p);
  REQUIRE(!r.trace.objective_history.empty());
  CHECK(r.trace.objective_history.back() < 0.0);
  CHECK(std::isfinite(r.x.norm()));
}

TEST_CASE("homotopy schedule and termination") {
  for (int i = 0; i < 20; ++i) {
    auto ci = build_A(sample_instance(2, 4, 4, 4, 1.0, derive_seed(70, i)));
    auto p = default_params(ci);
    auto r = homotopy_solve(ci, 4, p);
    CHECK(r.trace.feasible);
    CHECK(is_qce_feasible(r.x, 4, 0.0));
    for (size_t t = 0; t < r.trace.lambdas.size(); ++t)
      CHECK(r.trace.lambdas[t] == doctest::Approx(p.lambda0 * std::pow(5.0, t)));
    auto all = vertex_objectives(ci, 4);
    double obj = ci_objective(ci, r.x).value;
    bool found = false;
    for (double v : all) found = found || std::abs(v - obj) < 1e-12;
    CHECK(found);
  }
}

TEST_CASE("hand instance reaches the best vertex") {
  auto ci = hand_ci();
  auto r = homotopy_solve(ci, 4, default_params(ci));
  auto best = exhaustive_oracle(ci, 4);
  CHECK((r.x - best.x).norm() < 1e-15);
}

TEST_CASE("determinism") {
  auto ci = build_A(sample_instance(3, 8, 8, 8, 1.0, 17));
  auto p = default_params(ci);
  auto a = homotopy_solve(ci, 8, p), b = homotopy_solve(ci, 8, p);
  CHECK(a.x == b.x);
  CHECK(a.trace.inner_iterations == b.trace.inner_iterations);
}
