#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace qce {

/// One antenna's real coordinates [Re, Im].
struct Block2 {
  double u = 0.0;
  double v = 0.0;

  friend bool operator==(const Block2&, const Block2&) = default;
};

double norm(Block2 p);

inline constexpr double kHullTolerance = 1e-10;
inline constexpr double kRootResidualTolerance = 1e-8;

/// Vertex `index` (0-based) of the QCE set: angle (2 index + 1) pi / L.
/// Every vertex coordinate in the project is produced by this function.
Block2 qce_vertex(int L, int index);
std::vector<Block2> qce_vertices(int L);

struct NearestVertex {
  Block2 vertex;
  int index = 0;
  bool degenerate = false;  // p was the origin
};

/// Closest vertex in Euclidean distance, ties to the lower index.
NearestVertex nearest_vertex(Block2 p, int L);

/// Membership in conv(X_L): all L edge half-planes n_j . p <= cos(pi/L) + tol.
bool in_qce_hull(Block2 p, int L, double tol = kHullTolerance);

/// True iff every block of x is within `tol` of a vertex.
bool is_qce_feasible(const Eigen::VectorXd& x, int L, double tol);

/// Sector frame: rotation by alpha = sector * 2pi/L taking p to
/// an angle in [-pi/L, pi/L), where the active hull edge is u = cos(pi/L).
struct SectorFrame {
  double alpha = 0.0;
  int sector = 0;  // in [0, L)
  double u_rot = 0.0;
  double v_rot = 0.0;
};

SectorFrame rotate_to_sector(Block2 p, int L);
/// Inverse rotation P_alpha^{-1} q.
Block2 rotate_from_sector(Block2 q, double alpha);

/// h(r): the optimal value of the subproblem restricted to the circle of
/// radius r, in sector coordinates (u_rot > 0).
class RadialProfile {
 public:
  RadialProfile(double u_rot, double v_rot, double beta, int L);

  double inradius() const { return c_; }
  double radius_of_point() const { return rho_; }
  /// Radius where the circular projection first meets the edge, in [c, 1].
  double r0() const { return r0_; }

  double value(double r) const;
  /// (r - rho)^2 - beta r
  double inner_value(double r) const;
  /// (c - u)^2 + (sqrt(r^2 - c^2) - |v|)^2 - beta r, for r >= c.
  double outer_value(double r) const;
  double outer_derivative(double r) const;

 private:
  double u_, v_abs_, beta_, c_, rho_, r0_;
};

struct StationaryRoot {
  std::optional<double> radius;  // empty: h' > 0 on (c, inf)
  bool used_fallback = false;
  double residual = 0.0;  // |h'(radius)|
};

/// Unique root r > cos(pi/L) of the outer-branch derivative h'(r) = 0,
/// i.e. of (2r - beta) sqrt(r^2 - c^2) = 2|v| r. Obtained from the squared
/// quartic 4r^4 - 4 beta r^3 + (beta^2 - 4c^2 - 4v^2) r^2 + 4 beta c^2 r
/// - beta^2 c^2 = 0 in closed form; spurious roots are filtered with the
/// unsquared equation, and bisection on h' takes over if nothing passes.
StationaryRoot quartic_stationary_root(double u_rot, double v_rot, double beta, int L,
                                       double residual_tol = kRootResidualTolerance);

/// (u - ut)^2 + (v - vt)^2 - beta sqrt(u^2 + v^2)
double subproblem_objective(Block2 x, Block2 target, double beta);

struct SubproblemInfo {
  double radius = 0.0;
  bool outer_branch = false;
  int vertex = -1;  // snapped vertex index, -1 if interior / edge point
  bool used_fallback = false;
  bool degenerate = false;  // target was the origin
};

/// Global minimizer of subproblem_objective over conv(X_L).
Block2 solve_2d_subproblem(Block2 target, double beta, int L,
                           SubproblemInfo* info = nullptr,
                           double residual_tol = kRootResidualTolerance);

}  // namespace qce
