// Acceptance checks. Each criterion prints one [PASS]/[FAIL] line; the exit
// code is nonzero if any of them fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>

#include "qce/ao_solver.hpp"
#include "qce/baselines.hpp"
#include "qce/oracles.hpp"
#include "qce/sim_harness.hpp"

using namespace qce;

namespace {

constexpr std::uint64_t kSeed = 777;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

bool report(int id, const std::string& name, bool ok, const std::string& detail) {
  std::cout << (ok ? "[PASS] " : "[FAIL] ") << id << ". " << name << ": " << detail
            << std::endl;
  return ok;
}

bool subproblem_grid() {
  const auto t0 = Clock::now();
  const int draws = 10000;
  const int levels[] = {4, 8, 16, 32};
  int failures = 0;
  double worst = -1e300;
  for (int L : levels) {
    const oracle::HullGrid grid(L, 2001);
    Rng rng(derive_seed(kSeed, 100 + L));
    for (int i = 0; i < draws / 4; ++i) {
      const Block2 t{-3.0 + 6.0 * rng.uniform(), -3.0 + 6.0 * rng.uniform()};
      const double beta = 4.0 * rng.uniform();
      const Block2 x = solve_2d_subproblem(t, beta, L);
      const auto ref = grid.min_subproblem(t, beta);
      const double tol = 2.0 * grid.spacing() * oracle::subproblem_lipschitz(t, beta);
      const double excess = subproblem_objective(x, t, beta) - ref.value;
      worst = std::max(worst, excess / tol);
      if (excess > tol || !in_qce_hull(x, L)) ++failures;
    }
  }
  const double secs = seconds_since(t0);
  return report(1, "2-D subproblem vs 2001x2001 grid", failures == 0 && secs < 120.0,
                fmt("%d/%d within tolerance, worst excess %.3g of tolerance, %.1f s",
                    draws - failures, draws, worst, secs));
}

bool quartic_roots() {
  const int draws = 10000;
  Rng rng(derive_seed(kSeed, 2));
  int roots = 0, fallbacks = 0;
  double worst = 0.0;
  for (int i = 0; i < draws; ++i) {
    const int L = 4 << rng.uniform_pow2(4);
    const Block2 t{-3.0 + 6.0 * rng.uniform(), -3.0 + 6.0 * rng.uniform()};
    const double beta = 4.0 * rng.uniform();
    const auto frame = rotate_to_sector(t, L);
    const auto root = quartic_stationary_root(frame.u_rot, frame.v_rot, beta, L);
    if (root.used_fallback) ++fallbacks;
    if (!root.radius) continue;
    ++roots;
    worst = std::max(worst, std::abs(oracle::outer_derivative(frame.v_rot, beta, L, *root.radius)));
  }
  const double rate = static_cast<double>(fallbacks) / draws;
  return report(2, "quartic stationary root", worst <= 1e-7 && rate < 1e-3,
                fmt("%d roots, worst |h'| %.2e, fallback rate %.4f%%", roots, worst, 100 * rate));
}

bool feasibility_trigger() {
  const int draws = 10000;
  Rng rng(derive_seed(kSeed, 3));
  int feasible = 0;
  for (int i = 0; i < draws; ++i) {
    const int L = 4 << rng.uniform_pow2(4);
    const Block2 t{-3.0 + 6.0 * rng.uniform(), -3.0 + 6.0 * rng.uniform()};
    const double beta = 2.0 + 2.0 * rng.uniform();
    const Block2 x = solve_2d_subproblem(t, beta, L);
    Eigen::VectorXd v(2);
    v << x.u, x.v;
    if (is_qce_feasible(v, L, 0.0)) ++feasible;
  }
  return report(3, "beta >= 2 gives a vertex", feasible == draws,
                fmt("%d/%d exactly feasible", feasible, draws));
}

bool homotopy_gap() {
  const int instances = 500;
  int optimal = 0, top3 = 0, feasible = 0;
  for (int i = 0; i < instances; ++i) {
    const auto ci = build_A(sample_instance(2, 4, 4, 4, 1.0, derive_seed(kSeed, i)));
    auto objs = vertex_objectives(ci, 4);
    std::sort(objs.begin(), objs.end());
    const auto sol = proposed_solve(ci, 4, default_params(ci));
    if (is_qce_feasible(sol.x, 4, 0.0)) ++feasible;
    if (sol.objective <= objs[0] + 1e-12) ++optimal;
    if (sol.objective <= objs[2] + 1e-12) ++top3;
  }
  const double p_opt = static_cast<double>(optimal) / instances;
  const double p_top3 = static_cast<double>(top3) / instances;
  return report(4, "homotopy vs exhaustive (K=2, N=4, M=4, L=4)",
                feasible == instances && p_opt >= 0.60 && p_top3 >= 0.90,
                fmt("feasible %d/%d, optimal %.1f%% (floor 60%%), top-3 %.1f%% (floor 90%%)",
                    feasible, instances, 100 * p_opt, 100 * p_top3));
}

bool exact_penalty() {
  int agree = 0, total = 0;
  for (int L : {4, 8}) {
    const oracle::HullGrid grid(L, 2001);
    for (int i = 0; i < 100; ++i) {
      const auto ci = build_A(sample_instance(1, 1, 4 << (i % 3), L, 1.0, derive_seed(kSeed + L, i)));
      const double lambda = 1.01 * lambda_threshold(ci, L);
      const auto ref = grid.min_penalized(ci.A, lambda);
      const double lip = ci.A.rowwise().norm().maxCoeff() + lambda;
      const double tol = 2.0 * grid.spacing() * lip;

      // vertices whose penalized value is within tolerance of the best one
      const auto verts = qce_vertices(L);
      std::vector<double> vals;
      for (const auto& v : verts) {
        Eigen::Vector2d x(v.u, v.v);
        vals.push_back((ci.A * x).maxCoeff() - lambda);
      }
      const double best = *std::min_element(vals.begin(), vals.end());
      bool ok = best <= ref.value + tol;
      bool near = false;
      for (int j = 0; j < L; ++j)
        if (vals[j] <= best + tol &&
            std::hypot(ref.point.u - verts[j].u, ref.point.v - verts[j].v) <= 4 * grid.spacing())
          near = true;
      agree += ok && near;
      ++total;
    }
  }
  return report(5, "penalized and discrete minimizers coincide", agree == total,
                fmt("%d/%d instances (N=K=1, L in {4,8}, lambda = 1.01 threshold)", agree, total));
}

SweepConfig desk_config() {
  SweepConfig c;
  c.K = 4;
  c.N = 16;
  c.M = 8;
  c.trials = 10000;
  c.seed = kSeed;
  return c;
}

double diff_se(const SweepRow& a, const SweepRow& b) {
  return std::hypot(a.standard_error(), b.standard_error());
}

bool ber_superiority(const SweepResult& r) {
  bool ok = true;
  std::ostringstream detail;
  for (double snr : {0.0, 5.0, 10.0, 15.0}) {
    const auto* p = r.find("proposed", 8, snr);
    const auto* m = r.find("msm", 8, snr);
    const double se = diff_se(*p, *m);
    bool here = p->ber <= m->ber;
    if (snr >= 10.0) here = here && m->ber - p->ber >= 2.0 * se;
    ok = ok && here;
    detail << fmt("%s%gdB %.3e vs %.3e (%.1f SE)", snr == 0.0 ? "" : ", ", snr, p->ber, m->ber,
                  se > 0 ? (m->ber - p->ber) / se : 0.0);
  }
  return report(6, "proposed BER below MSM (K=4, N=16, M=8, L=8, 1e4 trials)", ok, detail.str());
}

bool level_trend(const SweepResult& r) {
  const auto* l4 = r.find("proposed", 4, 15.0);
  const auto* l8 = r.find("proposed", 8, 15.0);
  const auto* l32 = r.find("proposed", 32, 15.0);
  const auto* zf = r.find("zf", 32, 15.0);
  const bool gain = l4->ber - l8->ber > 2.0 * diff_se(*l4, *l8);
  const double se32 = diff_se(*l32, *zf);
  const bool close = l32->ber - zf->ber <= 3.0 * se32;
  std::ostringstream detail;
  for (int L : {4, 8, 16, 32}) detail << fmt("L=%d %.3e, ", L, r.find("proposed", L, 15.0)->ber);
  detail << fmt("ZF %.3e; L4-L8 %.1f SE, L32-ZF %.1f SE", zf->ber,
                (l4->ber - l8->ber) / diff_se(*l4, *l8),
                se32 > 0 ? (l32->ber - zf->ber) / se32 : 0.0);
  return report(7, "BER improves with L and approaches ZF (15 dB)", gain && close, detail.str());
}

bool runtime_order(const SweepResult& r) {
  const auto* p = r.find("proposed", 8, 0.0);
  const auto* m = r.find("msm", 8, 0.0);
  return report(8, "proposed solve time <= MSM", p->mean_time_ms <= m->mean_time_ms,
                fmt("%.3f ms vs %.3f ms per instance", p->mean_time_ms, m->mean_time_ms));
}

bool decomposition_identity() {
  Rng rng(derive_seed(kSeed, 9));
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const auto inst = sample_instance(1 + i % 5, 1 + i % 7, 4 << (i % 3), 8, 0.5 + 0.1 * i,
                                      derive_seed(kSeed + 9, i));
    const auto ci = build_A(inst);
    Eigen::VectorXd x(ci.A.cols());
    for (auto& e : x) e = rng.gaussian();
    const Eigen::VectorXcd y =
        std::sqrt(inst.total_power / inst.antennas()) * inst.channel * real_to_complex(x);
    const Eigen::VectorXd ax = ci.A * x;
    const double half = std::numbers::pi / inst.M;
    for (int k = 0; k < inst.users(); ++k) {
      // y = aA sA + aB sB solved as a real 2x2 system
      const double phase = (2 * inst.symbols[k] + 1) * half;
      const Complex sa = std::polar(1.0, phase - half), sb = std::polar(1.0, phase + half);
      Eigen::Matrix2d B;
      B << sa.real(), sb.real(), sa.imag(), sb.imag();
      const Eigen::Vector2d a = B.partialPivLu().solve(Eigen::Vector2d(y(k).real(), y(k).imag()));
      worst = std::max({worst, std::abs(ax(2 * k) + a(0)), std::abs(ax(2 * k + 1) + a(1))});
    }
  }
  return report(9, "symbol-scaling identity", worst <= 1e-9, fmt("worst error %.2e", worst));
}

bool determinism() {
  SweepConfig c = desk_config();
  c.trials = 200;
  c.L_values = {4, 8};
  c.record_timing = false;
  auto text = [](const SweepResult& r) {
    std::ostringstream os;
    write_csv(r, os);
    return os.str();
  };
  c.threads = 1;
  const std::string serial = text(run_sweep(c));
  const std::string serial2 = text(run_sweep(c));
  c.threads = 4;
  const std::string parallel = text(run_sweep(c));
  const bool ok = serial == serial2 && serial == parallel;
  return report(10, "byte-identical sweep CSVs", ok,
                fmt("serial/serial %s, serial/4 threads %s (%zu bytes)",
                    serial == serial2 ? "identical" : "DIFFER",
                    serial == parallel ? "identical" : "DIFFER", serial.size()));
}

}  // namespace

int main() {
  bool ok = true;
  ok &= subproblem_grid();
  ok &= quartic_roots();
  ok &= feasibility_trigger();
  ok &= homotopy_gap();
  ok &= exact_penalty();

  SweepConfig snr = desk_config();
  snr.snr_db = {0.0, 5.0, 10.0, 15.0};
  snr.algorithms = {Algorithm::Proposed, Algorithm::Msm};
  const auto snr_sweep = run_sweep(snr);
  ok &= ber_superiority(snr_sweep);

  SweepConfig lvl = desk_config();
  lvl.snr_db = {15.0};
  lvl.L_values = {4, 8, 16, 32};
  lvl.algorithms = {Algorithm::Proposed, Algorithm::Zf};
  ok &= level_trend(run_sweep(lvl));

  ok &= runtime_order(snr_sweep);
  ok &= decomposition_identity();
  ok &= determinism();

  std::cout << (ok ? "all criteria passed" : "some criteria FAILED") << std::endl;
  return ok ? 0 : 1;
}
