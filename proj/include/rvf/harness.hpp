#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rvf/adaptive_filter.hpp"
#include "rvf/config.hpp"
#include "rvf/plant.hpp"

namespace rvf {

/// Per-trial traces. When `diverged` is set the traces stop at the last
/// finite step and `diverged_at` holds the offending iteration.
struct TrialResult {
  std::vector<double> a_priori_sq;  ///< e_a(n)^2, e_a = x^T (h_o - h(n-1))
  std::vector<double> deviation;    ///< ||h(n) - h_o||_2
  bool diverged = false;
  std::size_t diverged_at = 0;
  double runtime_s = 0.0;
};

struct AggregateResult {
  std::string label;
  std::string description;
  std::vector<double> nmsd_db;  ///< per iteration, mean over surviving trials
  std::vector<double> emse_db;  ///< per iteration
  double steady_nmsd_db = std::numeric_limits<double>::quiet_NaN();
  /// Median over trials of each trial's trailing-window NMSD.
  double median_steady_nmsd_db = std::numeric_limits<double>::quiet_NaN();
  double steady_emse_db = std::numeric_limits<double>::quiet_NaN();
  std::size_t diverged_trials = 0;
  std::size_t trials = 0;
  double runtime_s = 0.0;

  bool all_diverged() const { return diverged_trials == trials; }
};

struct ExperimentResult {
  std::vector<AggregateResult> algorithms;
  Plant plant;
  double plant_norm = 0.0;
  /// Mean Gaussian noise variance actually applied; NaN for alpha-stable.
  double mean_noise_variance = std::numeric_limits<double>::quiet_NaN();
  std::size_t horizon = 0;
  std::size_t steady_window = 0;
};

/// 20 log10(mean(deviations) / h_o_norm). The mean over trials is taken
/// before the logarithm; an all-zero deviation gives -infinity.
double nmsd_db(std::span<const double> deviations, double h_o_norm);

/// 10 log10 of the mean e_a^2 over the trailing `steady_window` samples of
/// every non-diverged trial. Throws AllDivergedError if none survived.
double emse_db(std::span<const TrialResult> trials, std::size_t steady_window);

/// One filter through one realization. Divergence is recorded, not thrown.
TrialResult run_trial(RecursiveFilter& filter, const KernelVector& plant,
                      std::span<const double> inputs, std::span<const double> noise);

/// Input (unit-variance WGN) and noise realizations of one trial. Every
/// algorithm in an experiment consumes the same pair.
struct TrialStreams {
  std::vector<double> input;
  std::vector<double> noise;
  double noise_variance = std::numeric_limits<double>::quiet_NaN();
};

TrialStreams make_trial_streams(const ExperimentConfig& config, const Plant& plant,
                                std::size_t trial);

/// Runs every configured algorithm over `trials` paired realizations.
/// Output is deterministic for a given config and seed regardless of the
/// thread count.
ExperimentResult run_experiment(const ExperimentConfig& config);

struct SweepResult {
  std::string parameter;
  std::vector<double> values;
  std::vector<ExperimentResult> runs;
};

/// Re-runs `base` once per value of the named config key.
SweepResult run_sweep(const ExperimentConfig& base, const std::string& parameter,
                      std::span<const double> values);

/// Snapshot of one step, kept for checking the energy relation.
struct RecordedStep {
  ExpandedInput x;
  Eigen::MatrixXd p_prev;    ///< P(n-1)
  Eigen::MatrixXd phi_prev;  ///< Phi(n-1) accumulated directly
  KernelVector dev_prev;     ///< h_o - h(n-1)
  KernelVector dev;          ///< h_o - h(n)
  double e = 0.0;
  double rho = 0.0;
};

struct Trajectory {
  std::vector<RecordedStep> steps;
  double lambda = 0.0;
  bool diverged = false;
  std::size_t diverged_at = 0;
};

/// Runs `filter` like run_identification while keeping P(n-1) and the
/// directly accumulated Phi(n-1) = lambda Phi(n-2) + rho x x^T for each step.
Trajectory record_trajectory(RecursiveFilter& filter, const KernelVector& plant,
                             std::span<const double> inputs,
                             std::span<const double> noise);

struct EnergyCheck {
  double max_residual = 0.0;            ///< weighted-energy balance, relative
  double max_a_posteriori_residual = 0.0;  ///< e_p = e_a - mu x^T P x e, relative
  std::size_t steps_checked = 0;
  bool skipped = false;
  std::string reason;
};

/// Evaluates, per step with mu = 1/(lambda/rho + x^T P(n-1) x) and
/// W = Phi(n-1)/mu,
///   ||h~(n)||_W^2 + e_a^2/(mu q) == ||h~(n-1)||_W^2 + e_p^2/(mu q)
/// and reports the largest relative residual. Diverged trajectories are
/// skipped. Steps with rho == 0 carry no update and are not counted.
EnergyCheck energy_conservation_check(const Trajectory& trajectory);

}  // namespace rvf
