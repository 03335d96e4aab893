#include "qce/qce_geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "qce/core_model.hpp"
#include "qce/errors.hpp"
#include "qce/quartic.hpp"

namespace qce {

namespace {

constexpr double kPi = std::numbers::pi;

double squared_distance(Block2 a, Block2 b) {
  const double du = a.u - b.u, dv = a.v - b.v;
  return du * du + dv * dv;
}

int wrap(int index, int L) { return ((index % L) + L) % L; }

}  // namespace

double norm(Block2 p) { return std::hypot(p.u, p.v); }

Block2 qce_vertex(int L, int index) {
  validate_quantization_level(L);
  const double angle = (2.0 * wrap(index, L) + 1.0) * kPi / L;
  return {std::cos(angle), std::sin(angle)};
}

std::vector<Block2> qce_vertices(int L) {
  validate_quantization_level(L);
  std::vector<Block2> out(L);
  for (int l = 0; l < L; ++l) out[l] = qce_vertex(L, l);
  return out;
}

NearestVertex nearest_vertex(Block2 p, int L) {
  validate_quantization_level(L);
  if (p.u == 0.0 && p.v == 0.0) return {qce_vertex(L, 0), 0, true};
  double phase = std::atan2(p.v, p.u);
  if (phase < 0.0) phase += 2.0 * kPi;
  const int guess = wrap(static_cast<int>(std::floor(phase / (2.0 * kPi / L))), L);
  // The angular guess can be off by one next to a sector boundary.
  NearestVertex best{{}, -1, false};
  double best_d = std::numeric_limits<double>::infinity();
  std::array<int, 3> candidates{wrap(guess - 1, L), guess, wrap(guess + 1, L)};
  std::sort(candidates.begin(), candidates.end());
  for (int idx : candidates) {
    const Block2 q = qce_vertex(L, idx);
    const double d = squared_distance(p, q);
    if (d < best_d) {
      best_d = d;
      best = {q, idx, false};
    }
  }
  return best;
}

bool in_qce_hull(Block2 p, int L, double tol) {
  validate_quantization_level(L);
  const double c = std::cos(kPi / L);
  for (int j = 0; j < L; ++j) {
    const double angle = 2.0 * kPi * j / L;
    if (std::cos(angle) * p.u + std::sin(angle) * p.v > c + tol) return false;
  }
  return true;
}

bool is_qce_feasible(const Eigen::VectorXd& x, int L, double tol) {
  if (x.size() % 2 != 0) throw ParameterError("x must have even length");
  for (Eigen::Index i = 0; i < x.size() / 2; ++i) {
    const Block2 p{x(2 * i), x(2 * i + 1)};
    const auto nv = nearest_vertex(p, L);
    if (std::sqrt(squared_distance(p, nv.vertex)) > tol) return false;
  }
  return true;
}

SectorFrame rotate_to_sector(Block2 p, int L) {
  validate_quantization_level(L);
  const double step = 2.0 * kPi / L;
  const double phase = std::atan2(p.v, p.u);
  const int sector = wrap(static_cast<int>(std::floor((phase + kPi / L) / step)), L);
  const double alpha = sector * step;
  const double ca = std::cos(alpha), sa = std::sin(alpha);
  return {alpha, sector, ca * p.u + sa * p.v, -sa * p.u + ca * p.v};
}

Block2 rotate_from_sector(Block2 q, double alpha) {
  const double ca = std::cos(alpha), sa = std::sin(alpha);
  return {ca * q.u - sa * q.v, sa * q.u + ca * q.v};
}

RadialProfile::RadialProfile(double u_rot, double v_rot, double beta, int L)
    : u_(u_rot),
      v_abs_(std::abs(v_rot)),
      beta_(beta),
      c_(std::cos(kPi / L)),
      rho_(std::hypot(u_rot, v_rot)) {
  r0_ = u_ > 0.0 ? std::clamp(rho_ / u_ * c_, c_, 1.0) : 1.0;
}

double RadialProfile::value(double r) const {
  return r <= r0_ ? inner_value(r) : outer_value(r);
}

double RadialProfile::inner_value(double r) const {
  const double d = r - rho_;
  return d * d - beta_ * r;
}

double RadialProfile::outer_value(double r) const {
  const double du = c_ - u_;
  const double g = std::sqrt(std::max(0.0, (r - c_) * (r + c_)));
  const double dv = g - v_abs_;
  return du * du + dv * dv - beta_ * r;
}

double RadialProfile::outer_derivative(double r) const {
  const double g = std::sqrt(std::max(0.0, (r - c_) * (r + c_)));
  if (g == 0.0)
    return v_abs_ == 0.0 ? 2.0 * r - beta_ : -std::numeric_limits<double>::infinity();
  return 2.0 * r - 2.0 * v_abs_ * r / g - beta_;
}

StationaryRoot quartic_stationary_root(double u_rot, double v_rot, double beta, int L,
                                       double residual_tol) {
  validate_quantization_level(L);
  if (!(u_rot > 0.0)) throw ParameterError("quartic_stationary_root needs u_rot > 0");
  if (!(beta >= 0.0)) throw ParameterError("beta must be >= 0");

  const RadialProfile profile(u_rot, v_rot, beta, L);
  const double c = profile.inradius();
  const double va = std::abs(v_rot);
  StationaryRoot out;

  if (va == 0.0) {
    // h'(r) = 2r - beta on (c, inf)
    if (beta / 2.0 > c) out.radius = beta / 2.0;
    return out;
  }

  auto unsquared = [&](double r) {
    const double g = std::sqrt(std::max(0.0, (r - c) * (r + c)));
    return (2.0 * r - beta) * g - 2.0 * va * r;
  };

  const double c2 = c * c;
  const auto roots = real_quartic_roots(4.0, -4.0 * beta,
                                        beta * beta - 4.0 * c2 - 4.0 * va * va,
                                        4.0 * beta * c2, -beta * beta * c2);
  double best = std::numeric_limits<double>::quiet_NaN();
  double best_res = std::numeric_limits<double>::infinity();
  for (double r : roots) {
    if (!(r > c) || 2.0 * r - beta < 0.0) continue;
    // One Newton step on h'; h' is increasing and concave on (c, inf), so a
    // step from the left stays admissible and one from the right may not.
    const double g = std::sqrt((r - c) * (r + c));
    const double d1 = profile.outer_derivative(r);
    const double d2 = 2.0 + 2.0 * va * c2 / (g * g * g);
    const double polished = r - d1 / d2;
    if (polished > c && std::abs(profile.outer_derivative(polished)) < std::abs(d1))
      r = polished;
    const double res = std::abs(unsquared(r));
    if (res < best_res) {
      best_res = res;
      best = r;
    }
  }

  if (best_res <= residual_tol) {
    out.radius = best;
    out.residual = std::abs(profile.outer_derivative(best));
    return out;
  }

  // Bisection on h', which runs from -inf at c (or < 0 at beta/2) to +inf.
  out.used_fallback = true;
  double lo = std::max(c, beta / 2.0);
  double hi = lo + va + 1.0;
  while (profile.outer_derivative(hi) <= 0.0) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * hi;
       ++it) {
    const double mid = 0.5 * (lo + hi);
    (profile.outer_derivative(mid) > 0.0 ? hi : lo) = mid;
  }
  const double r = 0.5 * (lo + hi);
  out.radius = r;
  out.residual = std::abs(profile.outer_derivative(r));
  return out;
}

double subproblem_objective(Block2 x, Block2 target, double beta) {
  return squared_distance(x, target) - beta * norm(x);
}

Block2 solve_2d_subproblem(Block2 target, double beta, int L, SubproblemInfo* info,
                           double residual_tol) {
  validate_quantization_level(L);
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw ParameterError("beta must be finite and >= 0");
  SubproblemInfo local;
  SubproblemInfo& diag = info ? *info : local;
  diag = SubproblemInfo{};
  const double c = std::cos(kPi / L);

  if (target.u == 0.0 && target.v == 0.0) {
    // Objective is r^2 - beta r in any direction.
    diag.degenerate = true;
    const double r = std::min(beta / 2.0, 1.0);
    diag.radius = r;
    if (r >= 1.0) {
      diag.vertex = 0;
      return qce_vertex(L, 0);
    }
    if (r <= c) return {r, 0.0};
    const double angle = kPi / L;
    return {r * std::cos(angle), r * std::sin(angle)};
  }

  const SectorFrame frame = rotate_to_sector(target, L);
  const RadialProfile profile(frame.u_rot, frame.v_rot, beta, L);
  const double rho = profile.radius_of_point();
  const double r0 = profile.r0();

  double r_star = 1.0;
  bool inner = false;
  if (beta < 2.0) {
    struct Candidate {
      double r;
      bool inner;
    };
    std::array<Candidate, 3> candidates{};
    std::size_t count = 0;
    candidates[count++] = {std::min(rho + beta / 2.0, r0), true};
    if (r0 < 1.0) {
      const auto root = quartic_stationary_root(frame.u_rot, frame.v_rot, beta, L, residual_tol);
      diag.used_fallback = root.used_fallback;
      // h is convex on (r0, 1]; without a stationary point it increases.
      const double r2 = root.radius ? std::clamp(*root.radius, r0, 1.0) : r0;
      candidates[count++] = {r2, false};
      candidates[count++] = {1.0, false};
    }
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < count; ++i) {
      const auto& cand = candidates[i];
      const double h = cand.inner ? profile.inner_value(cand.r) : profile.outer_value(cand.r);
      if (h < best) {
        best = h;
        r_star = cand.r;
        inner = cand.inner;
      }
    }
  }
  diag.radius = r_star;
  diag.outer_branch = !inner;

  if (r_star >= 1.0) {
    // Both branch formulas land on the vertex at +-pi/L in the sector frame.
    const int idx = frame.v_rot >= 0.0 ? frame.sector : wrap(frame.sector - 1, L);
    diag.vertex = idx;
    return qce_vertex(L, idx);
  }

  Block2 rotated;
  if (inner) {
    const double scale = r_star / rho;
    rotated = {scale * frame.u_rot, scale * frame.v_rot};
  } else {
    const double g = std::sqrt(std::max(0.0, (r_star - c) * (r_star + c)));
    rotated = {c, frame.v_rot >= 0.0 ? g : -g};
  }
  return rotate_from_sector(rotated, frame.alpha);
}

}  // namespace qce
