#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qce/ao_solver.hpp"
#include "qce/baselines.hpp"

namespace qce {

/// Optional replacements for the values default_params derives from A.
struct ParamOverrides {
  std::optional<double> lambda0;
  std::optional<double> delta;
  std::optional<double> inner_tol;
  std::optional<int> inner_max_iters;
  std::optional<int> outer_max_iters;
  std::optional<bool> warm_start_y;
  std::optional<double> msm_inner_tol;
  std::optional<int> msm_inner_max_iters;
  NormChoice norm = NormChoice::Spectral;
};

/// Parameters for `algorithm` (Proposed or Msm) after applying overrides.
/// inner_tol / inner_max_iters apply to the proposed method only; MSM reads
/// the msm_* fields.
SolverParams resolve_params(const CIMatrix& ci, const ParamOverrides& overrides,
                            Algorithm algorithm = Algorithm::Proposed);

/// SNR is 10 log10(P_T / sigma^2) with sigma^2 the per-user noise variance.
double noise_variance(double total_power, double snr_db);

struct SweepConfig {
  int K = 4;
  int N = 16;
  int M = 8;
  std::vector<int> L_values{8};
  std::vector<double> snr_db{0.0, 5.0, 10.0, 15.0, 20.0};
  int trials = 1000;
  std::uint64_t first_trial = 0;  // trial indices are first_trial .. first_trial + trials - 1
  std::uint64_t seed = 1;
  std::vector<Algorithm> algorithms{Algorithm::Proposed, Algorithm::Msm, Algorithm::Zf};
  double total_power = 1.0;
  ParamOverrides overrides;
  int threads = 0;  // 0: QCE_THREADS, then hardware concurrency
  bool record_timing = true;

  void validate() const;
};

struct AlgorithmTrial {
  Algorithm algorithm = Algorithm::Proposed;
  std::vector<long long> bit_errors;  // one entry per SNR point
  double margin = 0.0;
  double solve_ms = 0.0;
};

struct TrialResult {
  long long bits = 0;  // bits sent per SNR point: K log2(M)
  std::vector<AlgorithmTrial> algorithms;
  int resamples = 0;  // channel redraws after a degenerate ZF Gram matrix
};

/// One channel / symbol draw for `trial_index`, precoded by every configured
/// algorithm and detected at every SNR point. The draw depends only on
/// (seed, trial_index): it is shared across L values, algorithms and SNR
/// points, and the noise realization is shared across algorithms.
TrialResult run_trial(const SweepConfig& config, int L, std::uint64_t trial_index);

struct SweepRow {
  std::string algorithm;
  int K = 0, N = 0, M = 0, L = 0;
  double snr_db = 0.0;
  long long trials = 0;
  long long bit_errors = 0;
  long long bits = 0;
  double ber = 0.0;
  double mean_margin = 0.0;
  double mean_time_ms = 0.0;
  std::uint64_t seed = 0;

  /// Binomial standard error sqrt(ber (1 - ber) / bits).
  double standard_error() const;
};

struct SweepResult {
  std::vector<SweepRow> rows;  // sorted by (algorithm, L, snr_db)
  int resamples = 0;

  const SweepRow* find(std::string_view algorithm, int L, double snr_db) const;
};

SweepResult run_sweep(const SweepConfig& config);

inline constexpr const char* kCsvHeader =
    "algorithm,K,N,M,L,snr_db,trials,bit_errors,bits,ber,mean_margin,mean_time_ms,seed";

void write_csv(const SweepResult& result, std::ostream& out);
/// Throws std::runtime_error naming the path on I/O failure.
void write_csv(const SweepResult& result, const std::string& path);
std::vector<SweepRow> read_csv(const std::string& path);

}  // namespace qce
