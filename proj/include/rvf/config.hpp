#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rvf/adaptive_filter.hpp"
#include "rvf/noise.hpp"
#include "rvf/plant.hpp"

namespace rvf {

enum class NoiseKind { kGaussian, kAlphaStable };

/// Noise as written in a config: Gaussian by explicit variance or by SNR
/// against the per-trial clean output power, or symmetric alpha-stable.
struct NoiseSpec {
  NoiseKind kind = NoiseKind::kGaussian;
  std::optional<double> snr_db;
  std::optional<double> variance;
  AlphaStableParams stable{1.25, 1.0 / 15.0};
};

struct AlgorithmSpec {
  std::string label;
  EstimatorSpec estimator;
};

/// Declarative Monte-Carlo identification scenario.
///
/// Text form: one `key = value` per line, `#` starts a comment. Keys:
///   plant          builtin | <path to plant file, relative to the config>
///   memory_length  M for the builtin plant (default 4, L = 14)
///   algorithms     comma list of gm, rls, rlm, lpn
///   sigma          Geman-McClure sigma
///   hampel         t1, t2, t3 (default 0.6, 1.3, 1.8)
///   rlm_window     N_w (default 14)
///   p, lp_floor    RLpN order and weight floor (default 1.2, 1e-3)
///   lambda, zeta   forgetting factor, P(0) = I / zeta
///   noise          gaussian | alpha_stable
///   snr_db | noise_variance, alpha, gamma
///   horizon, trials, steady_window, seed, threads
/// Unknown or repeated keys are errors.
struct ExperimentConfig {
  std::string plant_source = "builtin";
  std::filesystem::path base_dir;
  std::size_t memory_length = 4;
  std::vector<std::string> algorithm_names{"gm", "rls"};
  GemanMcClureParams gm{0.5};
  HampelParams hampel;
  std::size_t rlm_window = 14;
  LpParams lp{1.2};
  double lp_floor = 1e-3;
  double lambda = 0.99;
  double zeta = kDefaultZeta;
  NoiseSpec noise;
  std::size_t horizon = 5000;
  std::size_t trials = 300;
  std::size_t steady_window = 0;  ///< 0 selects the final 10% of the horizon
  std::optional<std::uint64_t> seed;
  std::size_t threads = 0;  ///< 0 selects the hardware concurrency

  /// Sets one key from its textual value, as in a config line. Throws
  /// ConfigError for unknown keys or malformed values.
  void set(const std::string& key, const std::string& value);

  /// Throws ConfigError when the combination of values cannot run.
  void validate() const;

  std::size_t effective_steady_window() const;
  std::vector<AlgorithmSpec> algorithms() const;
  Plant resolve_plant() const;
};

ExperimentConfig parse_config(std::istream& in, const std::string& source_name);
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace rvf
