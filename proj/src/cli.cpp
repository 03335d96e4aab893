#include "qce/cli.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qce/baselines.hpp"
#include "qce/errors.hpp"
#include "qce/selftest.hpp"
#include "qce/sim_harness.hpp"

namespace qce {

namespace {

struct Options {
  int K = 4;
  int N = 16;
  int M = 8;
  std::vector<std::string> L;
  std::vector<std::string> snr;
  int trials = 1000;
  std::uint64_t seed = 1;
  std::vector<std::string> algos;
  std::string out;
  double power = 1.0;
  int threads = 0;
  bool no_timing = false;
  std::string instance;
  std::string save_instance;
  std::optional<double> lambda0;
  std::optional<double> delta;
  std::optional<double> inner_tol;
  std::optional<int> inner_max_iters;
  std::optional<int> outer_max_iters;
  bool warm_start_y = false;
  std::optional<double> msm_inner_tol;
  std::optional<int> msm_inner_max_iters;
  std::string norm = "spectral";
};

std::vector<int> parse_int_list(const std::vector<std::string>& items) {
  std::vector<int> out;
  for (double v : parse_number_list(items)) {
    if (v != std::floor(v)) throw ParameterError("expected integers in list");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

std::vector<Algorithm> parse_algorithms(const std::vector<std::string>& items) {
  std::vector<Algorithm> out;
  for (const auto& item : items) {
    std::stringstream ss(item);
    for (std::string name; std::getline(ss, name, ',');)
      if (!name.empty()) out.push_back(parse_algorithm(name));
  }
  return out;
}

ParamOverrides overrides_from(const Options& o) {
  ParamOverrides p;
  p.lambda0 = o.lambda0;
  p.delta = o.delta;
  p.inner_tol = o.inner_tol;
  p.inner_max_iters = o.inner_max_iters;
  p.outer_max_iters = o.outer_max_iters;
  if (o.warm_start_y) p.warm_start_y = true;
  p.msm_inner_tol = o.msm_inner_tol;
  p.msm_inner_max_iters = o.msm_inner_max_iters;
  if (o.norm == "frobenius")
    p.norm = NormChoice::Frobenius;
  else if (o.norm != "spectral")
    throw ParameterError("--norm must be 'spectral' or 'frobenius'");
  return p;
}

ProblemInstance instance_from(const Options& o) {
  if (!o.instance.empty()) return load_instance(o.instance);
  const auto levels = o.L.empty() ? std::vector<int>{8} : parse_int_list(o.L);
  return sample_instance(o.K, o.N, o.M, levels.front(), o.power, o.seed);
}

void print_vector(std::ostream& out, const char* name, const Eigen::VectorXd& x) {
  out << name << " =";
  for (double e : x) out << ' ' << e;
  out << '\n';
}

int cmd_precode(const Options& o, std::ostream& out) {
  const ProblemInstance inst = instance_from(o);
  if (!o.save_instance.empty()) save_instance(inst, o.save_instance);
  const auto algos = o.algos.empty() ? std::vector<Algorithm>{Algorithm::Proposed}
                                     : parse_algorithms(o.algos);
  const CIMatrix ci = build_A(inst);
  const ParamOverrides overrides = overrides_from(o);
  const Eigen::VectorXcd s = inst.symbol_vector();
  out << std::setprecision(10);
  out << "K = " << inst.users() << "\nN = " << inst.antennas() << "\nM = " << inst.M
      << "\nL = " << inst.L << '\n';
  for (Algorithm a : algos) {
    PrecodeSolution sol;
    switch (a) {
      case Algorithm::Proposed:
        sol = proposed_solve(ci, inst.L, resolve_params(ci, overrides));
        break;
      case Algorithm::Msm:
        sol = msm_solve(ci, inst.L, resolve_params(ci, overrides, Algorithm::Msm));
        break;
      case Algorithm::Exhaustive:
        sol = exhaustive_oracle(ci, inst.L);
        break;
      case Algorithm::Zf: {
        sol.algorithm = Algorithm::Zf;
        sol.t = zf_precoder(inst.channel, s, inst.total_power);
        sol.margin = safety_margin(inst.channel * sol.t, s, inst.M);
        break;
      }
    }
    out << "\nalgorithm = " << algorithm_name(a) << '\n';
    if (a == Algorithm::Zf) {
      out << "margin = " << sol.margin << '\n';
      print_vector(out, "t", complex_to_real(sol.t));
      continue;
    }
    out << "feasible = " << (is_qce_feasible(sol.x, inst.L, 0.0) ? "true" : "false") << '\n';
    out << "objective = " << sol.objective << '\n';
    out << "margin = " << sol.margin << '\n';
    if (a == Algorithm::Msm) out << "relaxed_objective = " << sol.relaxed_objective << '\n';
    print_vector(out, "x", sol.x);
  }
  return 0;
}

int cmd_params(const Options& o, std::ostream& out) {
  const ProblemInstance inst = instance_from(o);
  const CIMatrix ci = build_A(inst);
  const SolverParams p = resolve_params(ci, overrides_from(o));
  out << std::setprecision(10);
  out << "lambda0 = " << p.lambda0 << "\ndelta = " << p.delta << "\nrho = " << p.rho
      << "\nc_scale = " << p.c_scale << "\nc_exponent = " << p.c_exponent
      << "\ntau_scale = " << p.tau_scale << "\ntau_exponent = " << p.tau_exponent
      << "\ninner_tol = " << p.inner_tol << "\ninner_max_iters = " << p.inner_max_iters
      << "\nouter_max_iters = " << p.outer_max_iters
      << "\nfeasibility_tol = " << p.feasibility_tol
      << "\nwarm_start_y = " << (p.warm_start_y ? "true" : "false")
      << "\nlambda_threshold = " << lambda_threshold(ci, inst.L) << '\n';
  return 0;
}

int cmd_sweep(const Options& o, bool over_l, std::ostream& out) {
  SweepConfig cfg;
  cfg.K = o.K;
  cfg.N = o.N;
  cfg.M = o.M;
  if (over_l) {
    cfg.L_values = o.L.empty() ? std::vector<int>{4, 8, 16, 32} : parse_int_list(o.L);
    cfg.snr_db = o.snr.empty() ? std::vector<double>{15.0} : parse_number_list(o.snr);
  } else {
    cfg.L_values = {o.L.empty() ? 8 : parse_int_list(o.L).front()};
    cfg.snr_db = o.snr.empty() ? std::vector<double>{0, 5, 10, 15, 20} : parse_number_list(o.snr);
  }
  cfg.trials = o.trials;
  cfg.seed = o.seed;
  if (!o.algos.empty()) cfg.algorithms = parse_algorithms(o.algos);
  cfg.total_power = o.power;
  cfg.overrides = overrides_from(o);
  cfg.threads = o.threads;
  cfg.record_timing = !o.no_timing;

  const SweepResult result = run_sweep(cfg);
  if (o.out.empty())
    write_csv(result, out);
  else
    write_csv(result, o.out);
  return 0;
}

}  // namespace

std::vector<double> parse_number_list(const std::vector<std::string>& items) {
  std::vector<double> out;
  auto number = [](const std::string& text) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(text, &used);
    } catch (const std::exception&) {
      throw ParameterError("not a number: '" + text + "'");
    }
    if (used != text.size()) throw ParameterError("not a number: '" + text + "'");
    return v;
  };
  for (const auto& item : items) {
    std::stringstream ss(item);
    for (std::string piece; std::getline(ss, piece, ',');) {
      if (piece.empty()) continue;
      std::vector<std::string> parts;
      std::stringstream ps(piece);
      for (std::string p; std::getline(ps, p, ':');) parts.push_back(p);
      if (parts.size() == 1) {
        out.push_back(number(parts[0]));
      } else if (parts.size() == 3) {
        const double start = number(parts[0]), step = number(parts[1]), stop = number(parts[2]);
        if (!(step > 0.0) || stop < start) throw ParameterError("bad range '" + piece + "'");
        const auto count = static_cast<long long>(std::floor((stop - start) / step + 1e-9));
        for (long long i = 0; i <= count; ++i) out.push_back(start + static_cast<double>(i) * step);
      } else {
        throw ParameterError("ranges are start:step:stop, got '" + piece + "'");
      }
    }
  }
  return out;
}

ProblemInstance load_instance(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw std::runtime_error("cannot open instance file '" + path + "'");
  nlohmann::json j;
  try {
    file >> j;
    ProblemInstance inst;
    inst.M = j.at("M").get<int>();
    inst.L = j.at("L").get<int>();
    inst.total_power = j.value("total_power", 1.0);
    inst.symbols = j.at("symbols").get<std::vector<int>>();
    const auto& rows = j.at("channel");
    const auto K = static_cast<Eigen::Index>(rows.size());
    const auto N = K > 0 ? static_cast<Eigen::Index>(rows.at(0).size()) : 0;
    inst.channel.resize(K, N);
    for (Eigen::Index k = 0; k < K; ++k) {
      if (static_cast<Eigen::Index>(rows[k].size()) != N)
        throw ParameterError("ragged channel matrix");
      for (Eigen::Index n = 0; n < N; ++n)
        inst.channel(k, n) = Complex(rows[k][n].at(0).get<double>(), rows[k][n].at(1).get<double>());
    }
    validate_instance(inst);
    return inst;
  } catch (const nlohmann::json::exception& e) {
    throw ParameterError("invalid instance file '" + path + "': " + e.what());
  }
}

void save_instance(const ProblemInstance& inst, const std::string& path) {
  nlohmann::json j;
  j["M"] = inst.M;
  j["L"] = inst.L;
  j["total_power"] = inst.total_power;
  j["symbols"] = inst.symbols;
  j["channel"] = nlohmann::json::array();
  for (Eigen::Index k = 0; k < inst.channel.rows(); ++k) {
    auto row = nlohmann::json::array();
    for (Eigen::Index n = 0; n < inst.channel.cols(); ++n)
      row.push_back({inst.channel(k, n).real(), inst.channel(k, n).imag()});
    j["channel"].push_back(row);
  }
  std::ofstream file(path);
  if (!file) throw std::runtime_error("cannot open '" + path + "' for writing");
  file << std::setprecision(17) << j.dump(2) << '\n';
}

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantized constant-envelope precoding for PSK downlink"};
  app.name(args.empty() ? "qce" : args.front());
  app.set_config("--config", "", "Read options from a `key = value` file (flags override it)");
  app.require_subcommand(1);

  Options o;
  app.add_option("--k", o.K, "Number of users")->check(CLI::PositiveNumber);
  app.add_option("--n", o.N, "Number of antennas")->check(CLI::PositiveNumber);
  app.add_option("--m", o.M, "PSK order");
  app.add_option("--l", o.L, "Quantization level(s), e.g. 8 or 4,8,16,32")->delimiter(',');
  app.add_option("--snr", o.snr, "SNR points in dB: a:step:b or a,b,c")->delimiter(',');
  app.add_option("--trials", o.trials, "Monte-Carlo trials per grid point");
  app.add_option("--seed", o.seed, "Master seed");
  app.add_option("--algos", o.algos, "Algorithms: proposed,msm,zf (precode also: exhaustive)")
      ->delimiter(',');
  app.add_option("--out", o.out, "CSV output path (default stdout)");
  app.add_option("--power", o.power, "Total transmit power P_T");
  app.add_option("--threads", o.threads, "Worker threads (0: QCE_THREADS or all cores)");
  app.add_flag("--no-timing", o.no_timing, "Write 0 for mean_time_ms (byte-stable CSV)");
  app.add_option("--instance", o.instance, "Load the instance from a JSON file");
  app.add_option("--save-instance", o.save_instance, "Write the instance used by precode");
  app.add_option("--lambda0", o.lambda0, "Initial penalty parameter");
  app.add_option("--delta", o.delta, "Penalty growth factor");
  app.add_option("--inner-tol", o.inner_tol, "AO successive-iterate tolerance");
  app.add_option("--inner-max-iters", o.inner_max_iters, "AO iteration cap");
  app.add_option("--outer-max-iters", o.outer_max_iters, "Homotopy stage cap");
  app.add_option("--msm-inner-tol", o.msm_inner_tol, "MSM relaxation tolerance");
  app.add_option("--msm-inner-max-iters", o.msm_inner_max_iters, "MSM relaxation iteration cap");
  app.add_flag("--warm-start-y", o.warm_start_y, "Carry y across homotopy stages instead of resetting it to uniform");
  app.add_option("--norm", o.norm, "Matrix norm in rho: spectral or frobenius");

  auto* precode = app.add_subcommand("precode", "Solve one instance and print x");
  auto* sweep_snr = app.add_subcommand("sweep-snr", "BER versus SNR at one L");
  auto* sweep_l = app.add_subcommand("sweep-l", "BER versus quantization level");
  auto* selftest = app.add_subcommand("selftest", "Run the oracle equivalence suites");
  auto* params = app.add_subcommand("params", "Print the resolved solver parameters");
  for (auto* sub : {precode, sweep_snr, sweep_l, selftest, params}) sub->fallthrough();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();  // program name
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (app.exit(e, out, err) == 0) return 0;  // --help
    err << app.help();
    return 2;
  }

  try {
    if (*precode) return cmd_precode(o, out);
    if (*sweep_snr) return cmd_sweep(o, false, out);
    if (*sweep_l) return cmd_sweep(o, true, out);
    if (*params) return cmd_params(o, out);
    if (*selftest) return run_selftest(out) ? 0 : 1;
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << '\n' << app.help();
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace qce
