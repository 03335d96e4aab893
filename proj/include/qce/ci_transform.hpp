#pragma once

#include "qce/core_model.hpp"

namespace qce {

/// Real symbol-scaling data for one instance. Rows come in per-user pairs:
/// row 2k is -alpha_A of user k, row 2k+1 is -alpha_B (0-based), so that
/// minimizing max_m a_m^T x maximizes the smallest scaling coefficient.
/// Columns are the real blocks [Re, Im] of each antenna.
struct CIMatrix {
  Eigen::MatrixXd A;
  int M = 4;

  int users() const { return static_cast<int>(A.rows() / 2); }
  int antennas() const { return static_cast<int>(A.cols() / 2); }
};

struct BoundaryPair {
  Complex a;  // s e^{-j pi/M}
  Complex b;  // s e^{+j pi/M}
};

BoundaryPair boundary_vectors(Complex s, int M);

struct AlphaPair {
  double alpha_a = 0.0;
  double alpha_b = 0.0;
};

/// Coordinates of y_hat in the (s_A, s_B) basis.
AlphaPair decompose_alpha(Complex y_hat, Complex s, int M);

CIMatrix build_A(const ProblemInstance& instance);

struct CIObjective {
  double value = 0.0;  // max_m a_m^T x
  int argmax = 0;      // lowest index attaining the max
  double margin = 0.0; // -value * sin(2 pi / M)
};

CIObjective ci_objective(const CIMatrix& ci, const Eigen::VectorXd& x);

/// Smallest distance from a noiseless received point to its decision
/// boundary over all users: min_k min(alpha_A, alpha_B) * sin(2 pi / M).
double safety_margin(const Eigen::VectorXcd& received, const Eigen::VectorXcd& symbols,
                     int M);

// x = [Re t_1, Im t_1, Re t_2, ...] <-> t
Eigen::VectorXcd real_to_complex(const Eigen::VectorXd& x);
Eigen::VectorXd complex_to_real(const Eigen::VectorXcd& t);

}  // namespace qce
