#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "qce/ao_solver.hpp"
#include "qce/ci_transform.hpp"

namespace qce {

enum class Algorithm { Proposed, Msm, Zf, Exhaustive };

std::string_view algorithm_name(Algorithm a);
Algorithm parse_algorithm(std::string_view name);

struct PrecodeSolution {
  Algorithm algorithm = Algorithm::Proposed;
  Eigen::VectorXd x;   // real QCE vector (empty for ZF)
  Eigen::VectorXcd t;  // normalized transmit vector x_T (ZF: the precoder output)
  bool feasible = false;
  double objective = 0.0;          // max_m a_m^T x after quantization
  double relaxed_objective = 0.0;  // MSM only: before quantization
  double margin = 0.0;
  double solve_ms = 0.0;
};

inline constexpr double kMsmInnerTol = 1e-4;
inline constexpr int kMsmInnerMaxIters = 5000;

/// default_params with the stopping rule tightened to kMsmInnerTol /
/// kMsmInnerMaxIters. At 1e-2 the relaxed objective is still a few percent
/// away from the LP optimum on 4x16 systems.
SolverParams msm_default_params(const CIMatrix& ci, NormChoice norm = NormChoice::Spectral);

/// Hull relaxation of the discrete problem (penalty weight zero) solved with
/// the AO engine, then every block rounded to its nearest QCE vertex.
PrecodeSolution msm_solve(const CIMatrix& ci, int L, const SolverParams& params);

/// Proposed method: homotopy_solve wrapped into a PrecodeSolution.
PrecodeSolution proposed_solve(const CIMatrix& ci, int L, const SolverParams& params);

/// t = c H^H (H H^H)^{-1} s with c > 0 such that ||t||^2 = total_power.
/// Throws DegenerateChannelError when cond(H H^H) > 1e12.
Eigen::VectorXcd zf_precoder(const Eigen::MatrixXcd& H, const Eigen::VectorXcd& s,
                             double total_power);

inline constexpr long long kExhaustiveLimit = 1'000'000;

/// max_m a_m^T x for every vertex assignment, in lexicographic order of the
/// vertex indices (antenna 0 most significant).
std::vector<double> vertex_objectives(const CIMatrix& ci, int L);

/// Global optimum of the discrete problem by enumeration of all L^N
/// assignments; ties go to the lexicographically smallest index tuple.
PrecodeSolution exhaustive_oracle(const CIMatrix& ci, int L);

}  // namespace qce
