// robust-volterra: command-line driver over the C API.
//
// Exit codes: 0 success, 1 usage error, 2 configuration / input / output
// error, 3 an algorithm lost every trial to divergence.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "rvf/rvf.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitConfig = 2;
constexpr int kExitDiverged = 3;

struct ConfigHandle {
  rvf_config* ptr = nullptr;
  ~ConfigHandle() { rvf_config_destroy(ptr); }
};

struct ResultHandle {
  rvf_result* ptr = nullptr;
  ~ResultHandle() { rvf_result_destroy(ptr); }
};

struct SweepHandle {
  rvf_sweep* ptr = nullptr;
  ~SweepHandle() { rvf_sweep_destroy(ptr); }
};

int report(rvf_status status) {
  std::cerr << "error (" << rvf_status_name(status) << "): " << rvf_last_error() << '\n';
  return status == RVF_ALL_DIVERGED ? kExitDiverged : kExitConfig;
}

std::string fmt_db(double v) { return fmt::format("{:.2f} dB", v); }

/// Flags shared by the experiment-driving subcommands.
struct RunOptions {
  std::string config_path;
  std::string out_dir = "results";
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> threads;
  std::optional<std::size_t> trials;
  std::optional<std::size_t> horizon;
  std::optional<double> snr_db;
  std::optional<double> sigma;
  std::optional<double> lambda;
  std::optional<double> alpha;
  std::optional<double> gamma;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "Experiment config file")->required();
    cmd->add_option("--out", out_dir, "Output directory for CSV files")->capture_default_str();
    cmd->add_option("--seed", seed, "Random seed (overrides the config)");
    cmd->add_option("--threads", threads,
                    "Worker threads (fallback: ROBUST_VOLTERRA_THREADS, then all cores)");
    cmd->add_option("--trials", trials, "Monte-Carlo trials");
    cmd->add_option("--horizon", horizon, "Iterations per trial");
    cmd->add_option("--snr-db", snr_db, "Gaussian noise SNR in dB");
    cmd->add_option("--sigma", sigma, "Geman-McClure sigma");
    cmd->add_option("--lambda", lambda, "Forgetting factor");
    cmd->add_option("--alpha", alpha, "Alpha-stable characteristic exponent");
    cmd->add_option("--gamma", gamma, "Alpha-stable dispersion");
  }

  /// Loads the config and applies command-line overrides.
  rvf_status load(ConfigHandle& cfg) const {
    if (rvf_status s = rvf_config_load(config_path.c_str(), &cfg.ptr); s != RVF_OK) return s;
    std::vector<std::pair<std::string, std::string>> sets;
    auto num = [](double v) { return fmt::format("{:.17g}", v); };
    if (seed) sets.emplace_back("seed", std::to_string(*seed));
    if (threads) {
      sets.emplace_back("threads", std::to_string(*threads));
    } else if (const char* env = std::getenv("ROBUST_VOLTERRA_THREADS")) {
      sets.emplace_back("threads", env);
    }
    if (trials) sets.emplace_back("trials", std::to_string(*trials));
    if (horizon) sets.emplace_back("horizon", std::to_string(*horizon));
    if (snr_db) {
      sets.emplace_back("noise", "gaussian");
      sets.emplace_back("snr_db", num(*snr_db));
    }
    if (alpha || gamma) sets.emplace_back("noise", "alpha_stable");
    if (alpha) sets.emplace_back("alpha", num(*alpha));
    if (gamma) sets.emplace_back("gamma", num(*gamma));
    if (sigma) sets.emplace_back("sigma", num(*sigma));
    if (lambda) sets.emplace_back("lambda", num(*lambda));
    for (const auto& [k, v] : sets) {
      if (rvf_status s = rvf_config_set(cfg.ptr, k.c_str(), v.c_str()); s != RVF_OK) return s;
    }
    return rvf_config_validate(cfg.ptr);
  }
};

/// Prints the summary table; returns true when some algorithm lost every trial.
bool print_summary(const rvf_result* result) {
  bool dominated = false;
  std::cout << fmt::format("{:<10} {:>16} {:>16} {:>16} {:>10} {:>10}\n", "algorithm",
                           "steady NMSD", "median NMSD", "steady EMSE", "diverged",
                           "runtime_s");
  for (std::size_t i = 0; i < rvf_result_algorithm_count(result); ++i) {
    rvf_summary s{};
    rvf_result_summary(result, i, &s);
    std::cout << fmt::format("{:<10} {:>16} {:>16} {:>16} {:>10} {:>10.3f}\n", s.label,
                             fmt_db(s.steady_nmsd_db), fmt_db(s.median_steady_nmsd_db),
                             fmt_db(s.steady_emse_db),
                             fmt::format("{}/{}", s.diverged_trials, s.trials), s.runtime_s);
    if (s.diverged_trials == s.trials) dominated = true;
  }
  const double v = rvf_result_mean_noise_variance(result);
  if (v == v) std::cout << fmt::format("mean noise variance: {:.9g}\n", v);
  return dominated;
}

int run_experiment_command(const RunOptions& opts, const std::string& algorithms) {
  ConfigHandle cfg;
  if (rvf_status s = opts.load(cfg); s != RVF_OK) return report(s);
  if (!algorithms.empty()) {
    if (rvf_status s = rvf_config_set(cfg.ptr, "algorithms", algorithms.c_str()); s != RVF_OK) {
      return report(s);
    }
  }
  ResultHandle result;
  if (rvf_status s = rvf_experiment_run(cfg.ptr, &result.ptr); s != RVF_OK) return report(s);
  if (rvf_status s = rvf_result_write(result.ptr, opts.out_dir.c_str()); s != RVF_OK) {
    return report(s);
  }
  const bool dominated = print_summary(result.ptr);
  std::cout << "wrote " << opts.out_dir << "/{traces,summary,nmsd,emse}.csv\n";
  if (dominated) {
    std::cerr << "error: at least one algorithm diverged in every trial\n";
    return kExitDiverged;
  }
  return kExitOk;
}

std::vector<double> parse_values(const std::string& list) {
  std::vector<double> values;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    if (used != item.size()) throw std::invalid_argument(item);
    values.push_back(v);
  }
  return values;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust second-order Volterra adaptive filtering experiments"};
  app.require_subcommand(1);

  // theory
  auto* theory = app.add_subcommand("theory", "Predict the steady-state EMSE under Gaussian noise");
  std::optional<double> t_snr, t_var;
  double t_sigma = 1.0, t_lambda = 0.99;
  std::size_t t_len = 14;
  auto* snr_opt = theory->add_option("--snr-db", t_snr, "SNR in dB (unit clean-signal power)");
  auto* var_opt = theory->add_option("--noise-variance", t_var, "Noise variance");
  snr_opt->excludes(var_opt);
  theory->add_option("--sigma", t_sigma, "Geman-McClure sigma")->required();
  theory->add_option("--lambda", t_lambda, "Forgetting factor")->capture_default_str();
  theory->add_option("--L", t_len, "Expanded filter length")->capture_default_str();

  // identify
  auto* identify = app.add_subcommand("identify", "Run the configured identification experiment");
  RunOptions identify_opts;
  identify_opts.attach(identify);

  // compare
  auto* compare = app.add_subcommand("compare", "Run a paired comparison of algorithms");
  RunOptions compare_opts;
  compare_opts.attach(compare);
  std::string compare_algorithms;
  compare->add_option("--algorithms", compare_algorithms, "Comma list of gm, rls, rlm, lpn")
      ->required();

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Repeat an experiment over values of one parameter");
  RunOptions sweep_opts;
  sweep_opts.attach(sweep);
  std::string sweep_param, sweep_values;
  sweep->add_option("--param", sweep_param, "Config key to vary (e.g. sigma)")->required();
  sweep->add_option("--values", sweep_values, "Comma list of values")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  if (theory->parsed()) {
    if (!t_snr && !t_var) {
      std::cerr << "theory: give --snr-db or --noise-variance\n\n" << theory->help();
      return kExitUsage;
    }
    rvf_theory_inputs in{0.0, t_lambda, t_len, t_sigma};
    if (t_snr) {
      if (rvf_status s = rvf_calibrate_snr(1.0, *t_snr, &in.noise_variance); s != RVF_OK) {
        return report(s);
      }
    } else {
      in.noise_variance = *t_var;
    }
    rvf_emse_prediction p{};
    if (rvf_status s = rvf_theory_predict_emse(&in, &p); s != RVF_OK) return report(s);
    std::cout << "EMSE: " << fmt_db(p.emse_db) << '\n'
              << fmt::format("emse: {:.9g}\nphi: {:.9g}\nnoise_variance: {:.9g}\n", p.emse,
                             p.varphi, in.noise_variance);
    return kExitOk;
  }
  if (identify->parsed()) return run_experiment_command(identify_opts, "");
  if (compare->parsed()) return run_experiment_command(compare_opts, compare_algorithms);

  std::vector<double> values;
  try {
    values = parse_values(sweep_values);
  } catch (const std::exception&) {
    std::cerr << "sweep: --values must be a comma list of numbers\n";
    return kExitUsage;
  }
  ConfigHandle cfg;
  if (rvf_status s = sweep_opts.load(cfg); s != RVF_OK) return report(s);
  SweepHandle result;
  if (rvf_status s = rvf_sweep_run(cfg.ptr, sweep_param.c_str(), values.data(), values.size(),
                                   &result.ptr);
      s != RVF_OK) {
    return report(s);
  }
  if (rvf_status s = rvf_sweep_write(result.ptr, sweep_opts.out_dir.c_str()); s != RVF_OK) {
    return report(s);
  }
  bool dominated = false;
  for (std::size_t i = 0; i < rvf_sweep_size(result.ptr); ++i) {
    std::cout << sweep_param << " = " << fmt::format("{:g}", values[i]) << '\n';
    dominated |= print_summary(rvf_sweep_result(result.ptr, i));
  }
  std::cout << "wrote " << sweep_opts.out_dir << "/sweep.{csv,dat}\n";
  return dominated ? kExitDiverged : kExitOk;
}
