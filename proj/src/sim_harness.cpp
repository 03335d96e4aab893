#include "qce/sim_harness.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>
#include <tuple>

#include "qce/errors.hpp"

namespace qce {

namespace {

// Sub-stream keys under a trial seed.
constexpr std::uint64_t kNoiseStream = 0x6e6f697365ULL;
constexpr std::uint64_t kChannelStream = 0x6368616eULL;

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("QCE_THREADS")) {
    int value = 0;
    const auto [ptr, ec] = std::from_chars(env, env + std::char_traits<char>::length(env), value);
    if (ec == std::errc() && value > 0) return value;
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", value);
  return buf;
}

}  // namespace

SolverParams resolve_params(const CIMatrix& ci, const ParamOverrides& o, Algorithm algorithm) {
  const bool msm = algorithm == Algorithm::Msm;
  SolverParams p = msm ? msm_default_params(ci, o.norm) : default_params(ci, o.norm);
  if (o.lambda0) p.lambda0 = *o.lambda0;
  if (o.delta) p.delta = *o.delta;
  if (!msm && o.inner_tol) p.inner_tol = *o.inner_tol;
  if (!msm && o.inner_max_iters) p.inner_max_iters = *o.inner_max_iters;
  if (msm && o.msm_inner_tol) p.inner_tol = *o.msm_inner_tol;
  if (msm && o.msm_inner_max_iters) p.inner_max_iters = *o.msm_inner_max_iters;
  if (o.outer_max_iters) p.outer_max_iters = *o.outer_max_iters;
  if (o.warm_start_y) p.warm_start_y = *o.warm_start_y;
  return p;
}

double noise_variance(double total_power, double snr_db) {
  return total_power * std::pow(10.0, -snr_db / 10.0);
}

void SweepConfig::validate() const {
  if (K < 1 || N < 1) throw ParameterError("K and N must be positive");
  validate_modulation_order(M);
  if (L_values.empty()) throw ParameterError("at least one L value is required");
  for (int L : L_values) validate_quantization_level(L);
  if (snr_db.empty()) throw ParameterError("SNR list must be nonempty");
  for (double s : snr_db)
    if (std::isnan(s)) throw ParameterError("SNR values must not be NaN");
  if (trials < 1) throw ParameterError("trials must be >= 1");
  if (algorithms.empty()) throw ParameterError("at least one algorithm is required");
  for (Algorithm a : algorithms)
    if (a == Algorithm::Exhaustive) throw ParameterError("exhaustive is not a sweep algorithm");
  if (K > N && std::find(algorithms.begin(), algorithms.end(), Algorithm::Zf) != algorithms.end())
    throw ParameterError("zero forcing needs K <= N");
  if (!(total_power > 0.0)) throw ParameterError("total power must be positive");
}

TrialResult run_trial(const SweepConfig& config, int L, std::uint64_t trial_index) {
  validate_quantization_level(L);
  const std::uint64_t trial_seed = derive_seed(config.seed, trial_index);
  const int bits_per_symbol = std::countr_zero(static_cast<unsigned>(config.M));

  TrialResult result;
  result.bits = static_cast<long long>(config.K) * bits_per_symbol;

  // Redraw channels whose Gram matrix would break zero forcing, whether or
  // not ZF is requested, so every algorithm set sees the same channels.
  ProblemInstance instance;
  std::optional<Eigen::VectorXcd> zf_t;
  const bool zf_possible = config.K <= config.N;
  for (std::uint64_t attempt = 0;; ++attempt) {
    instance = sample_instance(config.K, config.N, config.M, L, config.total_power,
                               derive_seed(derive_seed(trial_seed, kChannelStream), attempt));
    if (!zf_possible) break;
    try {
      zf_t = zf_precoder(instance.channel, instance.symbol_vector(), config.total_power);
      break;
    } catch (const DegenerateChannelError&) {
      ++result.resamples;
      if (attempt > 1000) throw;
    }
  }

  const Eigen::VectorXcd symbols = instance.symbol_vector();
  const CIMatrix ci = build_A(instance);
  const double amplitude = std::sqrt(config.total_power / config.N);

  for (Algorithm algorithm : config.algorithms) {
    AlgorithmTrial out;
    out.algorithm = algorithm;
    Eigen::VectorXcd t;
    const auto start = std::chrono::steady_clock::now();
    switch (algorithm) {
      case Algorithm::Proposed:
        t = amplitude * proposed_solve(ci, L, resolve_params(ci, config.overrides)).t;
        break;
      case Algorithm::Msm:
        t = amplitude * msm_solve(ci, L, resolve_params(ci, config.overrides, Algorithm::Msm)).t;
        break;
      case Algorithm::Zf:
        t = *zf_t;
        break;
      case Algorithm::Exhaustive:
        throw ParameterError("exhaustive is not a sweep algorithm");
    }
    if (config.record_timing)
      out.solve_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - start)
                         .count();

    out.margin = safety_margin(instance.channel * t, symbols, config.M);
    out.bit_errors.resize(config.snr_db.size());
    for (std::size_t s = 0; s < config.snr_db.size(); ++s) {
      const double sigma2 = noise_variance(config.total_power, config.snr_db[s]);
      const Eigen::VectorXcd y = simulate_transmission(
          t, instance.channel, sigma2, derive_seed(derive_seed(trial_seed, kNoiseStream), s));
      long long errors = 0;
      for (int k = 0; k < config.K; ++k)
        errors += gray_bit_errors(instance.symbols[k], detect_psk(y(k), config.M).index);
      out.bit_errors[s] = errors;
    }
    result.algorithms.push_back(std::move(out));
  }
  return result;
}

double SweepRow::standard_error() const {
  if (bits <= 0) return 0.0;
  return std::sqrt(ber * (1.0 - ber) / static_cast<double>(bits));
}

const SweepRow* SweepResult::find(std::string_view algorithm, int L, double snr_db) const {
  for (const auto& row : rows)
    if (row.algorithm == algorithm && row.L == L && row.snr_db == snr_db) return &row;
  return nullptr;
}

SweepResult run_sweep(const SweepConfig& config) {
  config.validate();
  const int threads = std::min(resolve_threads(config.threads), config.trials);
  SweepResult result;

  for (int L : config.L_values) {
    std::vector<TrialResult> trials(config.trials);
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
      for (int i = next++; i < config.trials; i = next++) {
        try {
          trials[i] = run_trial(config, L, config.first_trial + static_cast<std::uint64_t>(i));
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = config.trials;
        }
      }
    };
    if (threads <= 1) {
      worker();
    } else {
      std::vector<std::jthread> pool;
      for (int w = 0; w < threads; ++w) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);

    // Reduce in trial order so floating-point sums do not depend on scheduling.
    for (std::size_t a = 0; a < config.algorithms.size(); ++a) {
      double margin_sum = 0.0, time_sum = 0.0;
      std::vector<long long> errors(config.snr_db.size(), 0);
      long long bits = 0;
      for (const auto& trial : trials) {
        const auto& alg = trial.algorithms[a];
        margin_sum += alg.margin;
        time_sum += alg.solve_ms;
        bits += trial.bits;
        for (std::size_t s = 0; s < errors.size(); ++s) errors[s] += alg.bit_errors[s];
      }
      for (std::size_t s = 0; s < config.snr_db.size(); ++s) {
        SweepRow row;
        row.algorithm = std::string(algorithm_name(config.algorithms[a]));
        row.K = config.K;
        row.N = config.N;
        row.M = config.M;
        row.L = L;
        row.snr_db = config.snr_db[s];
        row.trials = config.trials;
        row.bit_errors = errors[s];
        row.bits = bits;
        row.ber = static_cast<double>(errors[s]) / static_cast<double>(bits);
        row.mean_margin = margin_sum / config.trials;
        row.mean_time_ms = time_sum / config.trials;
        row.seed = config.seed;
        result.rows.push_back(std::move(row));
      }
    }
    for (const auto& trial : trials) result.resamples += trial.resamples;
  }

  std::stable_sort(result.rows.begin(), result.rows.end(), [](const SweepRow& a, const SweepRow& b) {
    return std::tie(a.algorithm, a.L, a.snr_db) < std::tie(b.algorithm, b.L, b.snr_db);
  });
  return result;
}

void write_csv(const SweepResult& result, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const auto& r : result.rows) {
    out << r.algorithm << ',' << r.K << ',' << r.N << ',' << r.M << ',' << r.L << ','
        << format_double(r.snr_db) << ',' << r.trials << ',' << r.bit_errors << ',' << r.bits
        << ',' << format_double(r.ber) << ',' << format_double(r.mean_margin) << ','
        << format_double(r.mean_time_ms) << ',' << r.seed << '\n';
  }
}

void write_csv(const SweepResult& result, const std::string& path) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_csv(result, file);
  file.flush();
  if (!file) throw std::runtime_error("failed writing '" + path + "'");
}

std::vector<SweepRow> read_csv(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw std::runtime_error("cannot open '" + path + "' for reading");
  std::string line;
  if (!std::getline(file, line) || line != kCsvHeader)
    throw std::runtime_error("'" + path + "' does not start with the sweep CSV header");
  std::vector<SweepRow> rows;
  while (std::getline(file, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    for (std::string f; std::getline(ss, f, ',');) fields.push_back(f);
    if (fields.size() != 13) throw std::runtime_error("malformed row in '" + path + "'");
    SweepRow r;
    r.algorithm = fields[0];
    r.K = std::stoi(fields[1]);
    r.N = std::stoi(fields[2]);
    r.M = std::stoi(fields[3]);
    r.L = std::stoi(fields[4]);
    r.snr_db = std::stod(fields[5]);
    r.trials = std::stoll(fields[6]);
    r.bit_errors = std::stoll(fields[7]);
    r.bits = std::stoll(fields[8]);
    r.ber = std::stod(fields[9]);
    r.mean_margin = std::stod(fields[10]);
    r.mean_time_ms = std::stod(fields[11]);
    r.seed = std::stoull(fields[12]);
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace qce
