#include "rvf/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>

#include <fmt/format.h>

#include "rvf/error.hpp"

namespace rvf {

double nmsd_db(std::span<const double> deviations, double h_o_norm) {
  if (!(h_o_norm > 0.0)) {
    throw InvalidArgument("NMSD needs a non-zero plant");
  }
  if (deviations.empty()) throw InvalidArgument("no deviations supplied");
  double sum = 0.0;
  for (double d : deviations) sum += d;
  const double mean = sum / static_cast<double>(deviations.size());
  if (mean == 0.0) return -std::numeric_limits<double>::infinity();
  return 20.0 * std::log10(mean / h_o_norm);
}

double emse_db(std::span<const TrialResult> trials, std::size_t steady_window) {
  if (steady_window == 0) throw InvalidArgument("steady window must be positive");
  double sum = 0.0;
  std::size_t count = 0;
  for (const TrialResult& t : trials) {
    if (t.diverged) continue;
    if (t.a_priori_sq.size() < steady_window) {
      throw InvalidArgument("trial shorter than the steady-state window");
    }
    for (auto it = t.a_priori_sq.end() - static_cast<std::ptrdiff_t>(steady_window);
         it != t.a_priori_sq.end(); ++it) {
      sum += *it;
    }
    count += steady_window;
  }
  if (count == 0) throw AllDivergedError("every trial diverged; EMSE is undefined");
  return 10.0 * std::log10(sum / static_cast<double>(count));
}

TrialResult run_trial(RecursiveFilter& filter, const KernelVector& plant,
                      std::span<const double> inputs, std::span<const double> noise) {
  if (inputs.size() != noise.size()) {
    throw InvalidArgument("input and noise sequences differ in length");
  }
  if (static_cast<std::size_t>(plant.size()) != filter.length()) {
    throw InvalidArgument("plant length does not match filter length");
  }
  const auto start = std::chrono::steady_clock::now();
  TrialResult out;
  out.a_priori_sq.reserve(inputs.size());
  out.deviation.reserve(inputs.size());
  DelayLine line(memory_length_for(filter.length()));
  ExpandedInput x(plant.size());
  for (std::size_t n = 0; n < inputs.size(); ++n) {
    line.push(inputs[n]);
    expand_into(line.window(), x);
    const double clean = plant.dot(x);
    const double ea = clean - filter.weights().dot(x);
    try {
      filter.step(x, clean + noise[n]);
    } catch (const DivergenceError& err) {
      out.diverged = true;
      out.diverged_at = err.iteration();
      break;
    }
    out.a_priori_sq.push_back(ea * ea);
    out.deviation.push_back((filter.weights() - plant).norm());
  }
  out.runtime_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

TrialStreams make_trial_streams(const ExperimentConfig& config, const Plant& plant,
                                std::size_t trial) {
  const std::uint64_t seed = config.seed.value();
  TrialStreams s;
  RandomStream input_rng(seed, trial, 0);
  RandomStream noise_rng(seed, trial, 1);
  s.input = sample_gaussian(1.0, config.horizon, input_rng);
  if (config.noise.kind == NoiseKind::kAlphaStable) {
    s.noise = sample_sas(config.noise.stable, config.horizon, noise_rng);
    return s;
  }
  double variance = 0.0;
  if (config.noise.variance) {
    variance = *config.noise.variance;
  } else {
    // SNR against the clean output power realized in this trial.
    DelayLine line(plant.memory_length);
    ExpandedInput x(plant.kernel.size());
    double power = 0.0;
    for (double u : s.input) {
      line.push(u);
      expand_into(line.window(), x);
      const double y = plant.kernel.dot(x);
      power += y * y;
    }
    power /= static_cast<double>(s.input.size());
    variance = calibrate_snr(power, *config.noise.snr_db);
  }
  s.noise = sample_gaussian(variance, config.horizon, noise_rng);
  s.noise_variance = variance;
  return s;
}

namespace {

std::size_t resolve_threads(std::size_t requested) {
  if (requested != 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

struct Accumulator {
  std::vector<double> dev_sum;
  std::vector<double> ea_sum;
  std::vector<double> trial_steady_dev;
  std::size_t survivors = 0;
  std::size_t diverged = 0;
  double runtime = 0.0;
};

double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

double to_db20(double ratio) {
  return ratio == 0.0 ? -std::numeric_limits<double>::infinity() : 20.0 * std::log10(ratio);
}

double to_db10(double power) {
  return power == 0.0 ? -std::numeric_limits<double>::infinity() : 10.0 * std::log10(power);
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  const Plant plant = config.resolve_plant();
  const std::vector<AlgorithmSpec> algorithms = config.algorithms();
  const std::size_t horizon = config.horizon;
  const std::size_t window = config.effective_steady_window();
  const std::size_t n_alg = algorithms.size();
  const std::size_t length = static_cast<std::size_t>(plant.kernel.size());

  ExperimentResult result;
  result.plant = plant;
  result.plant_norm = plant.kernel.norm();
  result.horizon = horizon;
  result.steady_window = window;
  if (!(result.plant_norm > 0.0)) throw ConfigError("plant is identically zero");

  std::vector<Accumulator> acc(n_alg);
  for (Accumulator& a : acc) {
    a.dev_sum.assign(horizon, 0.0);
    a.ea_sum.assign(horizon, 0.0);
  }
  double noise_variance_sum = 0.0;

  // Trials run in fixed-size chunks; each chunk is reduced in trial order so
  // the sums do not depend on scheduling.
  const std::size_t threads = resolve_threads(config.threads);
  const std::size_t chunk = std::max<std::size_t>(threads * 4, 16);
  std::vector<std::vector<TrialResult>> slots;
  std::vector<double> slot_variance;
  for (std::size_t first = 0; first < config.trials; first += chunk) {
    const std::size_t count = std::min(chunk, config.trials - first);
    slots.assign(count, std::vector<TrialResult>(n_alg));
    slot_variance.assign(count, 0.0);

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    auto worker = [&] {
      for (std::size_t i = next++; i < count && !failed; i = next++) {
        try {
          const TrialStreams streams = make_trial_streams(config, plant, first + i);
          slot_variance[i] = streams.noise_variance;
          for (std::size_t a = 0; a < n_alg; ++a) {
            RecursiveFilter filter(length, config.lambda, config.zeta,
                                   algorithms[a].estimator);
            slots[i][a] = run_trial(filter, plant.kernel, streams.input, streams.noise);
          }
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
        }
      }
    };
    const std::size_t n_workers = std::min(threads, count);
    if (n_workers <= 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
      for (std::thread& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);

    for (std::size_t i = 0; i < count; ++i) {
      noise_variance_sum += slot_variance[i];
      for (std::size_t a = 0; a < n_alg; ++a) {
        const TrialResult& t = slots[i][a];
        Accumulator& ac = acc[a];
        ac.runtime += t.runtime_s;
        if (t.diverged) {
          ++ac.diverged;
          continue;
        }
        ++ac.survivors;
        double steady = 0.0;
        for (std::size_t n = 0; n < horizon; ++n) {
          ac.dev_sum[n] += t.deviation[n];
          ac.ea_sum[n] += t.a_priori_sq[n];
          if (n >= horizon - window) steady += t.deviation[n];
        }
        ac.trial_steady_dev.push_back(steady / static_cast<double>(window));
      }
    }
  }

  if (config.noise.kind == NoiseKind::kGaussian) {
    result.mean_noise_variance = noise_variance_sum / static_cast<double>(config.trials);
  }

  for (std::size_t a = 0; a < n_alg; ++a) {
    const Accumulator& ac = acc[a];
    AggregateResult agg;
    agg.label = algorithms[a].label;
    agg.description = describe(algorithms[a].estimator);
    agg.trials = config.trials;
    agg.diverged_trials = ac.diverged;
    agg.runtime_s = ac.runtime;
    agg.nmsd_db.assign(horizon, std::numeric_limits<double>::quiet_NaN());
    agg.emse_db.assign(horizon, std::numeric_limits<double>::quiet_NaN());
    if (ac.survivors > 0) {
      const double inv = 1.0 / static_cast<double>(ac.survivors);
      double steady_dev = 0.0, steady_ea = 0.0;
      for (std::size_t n = 0; n < horizon; ++n) {
        const double dev = ac.dev_sum[n] * inv;
        const double ea = ac.ea_sum[n] * inv;
        agg.nmsd_db[n] = to_db20(dev / result.plant_norm);
        agg.emse_db[n] = to_db10(ea);
        if (n >= horizon - window) {
          steady_dev += dev;
          steady_ea += ea;
        }
      }
      agg.steady_nmsd_db = to_db20(steady_dev / static_cast<double>(window) / result.plant_norm);
      agg.steady_emse_db = to_db10(steady_ea / static_cast<double>(window));
      agg.median_steady_nmsd_db = to_db20(median(ac.trial_steady_dev) / result.plant_norm);
    }
    result.algorithms.push_back(std::move(agg));
  }
  return result;
}

SweepResult run_sweep(const ExperimentConfig& base, const std::string& parameter,
                      std::span<const double> values) {
  if (values.empty()) throw ConfigError("sweep needs at least one value");
  SweepResult sweep;
  sweep.parameter = parameter;
  for (double v : values) {
    ExperimentConfig config = base;
    config.set(parameter, fmt::format("{:.17g}", v));
    sweep.values.push_back(v);
    sweep.runs.push_back(run_experiment(config));
  }
  return sweep;
}

Trajectory record_trajectory(RecursiveFilter& filter, const KernelVector& plant,
                             std::span<const double> inputs,
                             std::span<const double> noise) {
  if (inputs.size() != noise.size()) {
    throw InvalidArgument("input and noise sequences differ in length");
  }
  const auto n = plant.size();
  Trajectory traj;
  traj.lambda = filter.lambda();
  DelayLine line(memory_length_for(filter.length()));
  Eigen::MatrixXd phi = Eigen::MatrixXd::Identity(n, n) * filter.zeta();
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    RecordedStep step;
    line.push(inputs[i]);
    step.x = expand(line.window());
    step.p_prev = filter.inverse_correlation();
    step.phi_prev = phi;
    step.dev_prev = plant - filter.weights();
    try {
      const StepRecord rec = filter.step(step.x, plant.dot(step.x) + noise[i]);
      step.e = rec.e;
      step.rho = rec.rho;
    } catch (const DivergenceError& err) {
      traj.diverged = true;
      traj.diverged_at = err.iteration();
      break;
    }
    step.dev = plant - filter.weights();
    phi = filter.lambda() * phi + step.rho * step.x * step.x.transpose();
    traj.steps.push_back(std::move(step));
  }
  return traj;
}

EnergyCheck energy_conservation_check(const Trajectory& trajectory) {
  EnergyCheck check;
  if (trajectory.diverged) {
    check.skipped = true;
    check.reason = fmt::format("trajectory diverged at iteration {}", trajectory.diverged_at);
    return check;
  }
  auto rel = [](double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
  };
  for (const RecordedStep& s : trajectory.steps) {
    if (!(s.rho > 0.0)) continue;
    const double q = s.x.dot(s.p_prev * s.x);
    const double mu = 1.0 / (trajectory.lambda / s.rho + q);
    const double ea = s.x.dot(s.dev_prev);
    const double ep = s.x.dot(s.dev);
    const double norm_x = mu * q;
    const double lhs = s.dev.dot(s.phi_prev * s.dev) / mu + ea * ea / norm_x;
    const double rhs = s.dev_prev.dot(s.phi_prev * s.dev_prev) / mu + ep * ep / norm_x;
    check.max_residual = std::max(check.max_residual, rel(lhs, rhs));
    const double ep_scale = std::max({std::abs(ep), std::abs(ea), std::abs(norm_x * s.e)});
    if (ep_scale > 0.0) {
      check.max_a_posteriori_residual = std::max(
          check.max_a_posteriori_residual, std::abs(ep - (ea - norm_x * s.e)) / ep_scale);
    }
    ++check.steps_checked;
  }
  return check;
}

}  // namespace rvf
