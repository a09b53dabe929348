#include "rvf/rvf.h"

#include <cstring>
#include <sstream>
#include <string>

#include "rvf/adaptive_filter.hpp"
#include "rvf/config.hpp"
#include "rvf/error.hpp"
#include "rvf/estimators.hpp"
#include "rvf/harness.hpp"
#include "rvf/noise.hpp"
#include "rvf/report.hpp"
#include "rvf/theory.hpp"
#include "rvf/volterra.hpp"

struct rvf_delay_line {
  rvf::DelayLine line;
};

struct rvf_filter {
  rvf::RecursiveFilter filter;
};

struct rvf_rng {
  rvf::RandomStream stream;
};

struct rvf_config {
  rvf::ExperimentConfig config;
};

struct rvf_result {
  rvf::ExperimentResult result;
};

struct rvf_sweep {
  std::string parameter;
  std::vector<double> values;
  std::vector<rvf_result> runs;
};

namespace {

thread_local std::string g_last_error;

rvf_status to_status(rvf::ErrorCode code) {
  switch (code) {
    case rvf::ErrorCode::kInvalidArgument: return RVF_INVALID_ARGUMENT;
    case rvf::ErrorCode::kInvalidInput: return RVF_INVALID_INPUT;
    case rvf::ErrorCode::kDiverged: return RVF_DIVERGED;
    case rvf::ErrorCode::kNumerical: return RVF_NUMERICAL_ERROR;
    case rvf::ErrorCode::kInstabilityPredicted: return RVF_INSTABILITY_PREDICTED;
    case rvf::ErrorCode::kConfig: return RVF_CONFIG_ERROR;
    case rvf::ErrorCode::kIo: return RVF_IO_ERROR;
    case rvf::ErrorCode::kAllDiverged: return RVF_ALL_DIVERGED;
  }
  return RVF_INTERNAL_ERROR;
}

rvf_status fail(rvf_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

template <class F>
rvf_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return RVF_OK;
  } catch (const rvf::Error& e) {
    return fail(to_status(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(RVF_INTERNAL_ERROR, "out of memory");
  } catch (const std::exception& e) {
    return fail(RVF_INTERNAL_ERROR, e.what());
  }
}

#define RVF_REQUIRE(ptr)                                                   \
  do {                                                                     \
    if ((ptr) == nullptr) return fail(RVF_INVALID_ARGUMENT, #ptr " is null"); \
  } while (0)

rvf::EstimatorSpec to_spec(const rvf_estimator_spec& s) {
  switch (s.kind) {
    case RVF_ESTIMATOR_RLS: return rvf::PlainRls{};
    case RVF_ESTIMATOR_GEMAN_MCCLURE: return rvf::GemanMcClure{{s.sigma}};
    case RVF_ESTIMATOR_HAMPEL:
      return rvf::Hampel{{s.hampel[0], s.hampel[1], s.hampel[2]}, s.hampel_window};
    case RVF_ESTIMATOR_LP: return rvf::LeastPNorm{{s.p}, s.lp_floor};
  }
  throw rvf::InvalidArgument("unknown estimator kind");
}

rvf_status check_index(const rvf_result* result, size_t index) {
  if (index >= result->result.algorithms.size()) {
    return fail(RVF_INVALID_ARGUMENT, "algorithm index out of range");
  }
  return RVF_OK;
}

}  // namespace

extern "C" {

const char* rvf_status_name(rvf_status status) {
  switch (status) {
    case RVF_OK: return "ok";
    case RVF_INVALID_ARGUMENT: return "invalid-argument";
    case RVF_INVALID_INPUT: return "invalid-input";
    case RVF_DIVERGED: return "diverged";
    case RVF_NUMERICAL_ERROR: return "numerical-error";
    case RVF_INSTABILITY_PREDICTED: return "instability-predicted";
    case RVF_CONFIG_ERROR: return "config-error";
    case RVF_IO_ERROR: return "io-error";
    case RVF_ALL_DIVERGED: return "all-diverged";
    case RVF_INTERNAL_ERROR: return "internal-error";
  }
  return "unknown";
}

const char* rvf_last_error(void) { return g_last_error.c_str(); }

const char* rvf_version(void) { return "1.0.0"; }

rvf_status rvf_expanded_length(size_t memory_length, size_t* out) {
  RVF_REQUIRE(out);
  return guarded([&] { *out = rvf::expanded_length(memory_length); });
}

rvf_status rvf_delay_line_create(size_t memory_length, rvf_delay_line** out) {
  RVF_REQUIRE(out);
  return guarded([&] { *out = new rvf_delay_line{rvf::DelayLine(memory_length)}; });
}

void rvf_delay_line_destroy(rvf_delay_line* line) { delete line; }

rvf_status rvf_delay_line_push_and_expand(rvf_delay_line* line, double x_new, double* out,
                                          size_t out_len) {
  RVF_REQUIRE(line);
  RVF_REQUIRE(out);
  return guarded([&] {
    if (out_len != rvf::expanded_length(line->line.memory_length())) {
      throw rvf::InvalidArgument("output length does not equal M(M+3)/2");
    }
    const rvf::ExpandedInput x = rvf::push_and_expand(line->line, x_new);
    std::memcpy(out, x.data(), out_len * sizeof(double));
  });
}

rvf_status rvf_gm_loss(double e, double sigma, double* out) {
  RVF_REQUIRE(out);
  return guarded([&] {
    const rvf::GemanMcClureParams p{sigma};
    p.validate();
    *out = rvf::gm_loss(e, p);
  });
}

rvf_status rvf_gm_score(double e, double sigma, double* out) {
  RVF_REQUIRE(out);
  return guarded([&] {
    const rvf::GemanMcClureParams p{sigma};
    p.validate();
    *out = rvf::gm_score(e, p);
  });
}

rvf_status rvf_gm_weight(double e, double sigma, double* out) {
  RVF_REQUIRE(out);
  return guarded([&] {
    const rvf::GemanMcClureParams p{sigma};
    p.validate();
    *out = rvf::gm_weight(e, p);
  });
}

rvf_status rvf_estimator_spec_default(rvf_estimator_kind kind, rvf_estimator_spec* out) {
  RVF_REQUIRE(out);
  if (kind < RVF_ESTIMATOR_RLS || kind > RVF_ESTIMATOR_LP) {
    return fail(RVF_INVALID_ARGUMENT, "unknown estimator kind");
  }
  *out = rvf_estimator_spec{kind, 1.0, {0.6, 1.3, 1.8}, 14, 1.2, 1e-3};
  g_last_error.clear();
  return RVF_OK;
}

rvf_status rvf_filter_create(size_t length, double lambda, double zeta,
                             const rvf_estimator_spec* estimator, rvf_filter** out) {
  RVF_REQUIRE(estimator);
  RVF_REQUIRE(out);
  return guarded([&] {
    *out = new rvf_filter{rvf::RecursiveFilter(length, lambda, zeta, to_spec(*estimator))};
  });
}

void rvf_filter_destroy(rvf_filter* filter) { delete filter; }

rvf_status rvf_filter_step(rvf_filter* filter, const double* x, size_t length, double d,
                           rvf_step_record* record) {
  RVF_REQUIRE(filter);
  RVF_REQUIRE(x);
  return guarded([&] {
    const Eigen::Map<const Eigen::VectorXd> xv(x, static_cast<Eigen::Index>(length));
    const rvf::StepRecord r = filter->filter.step(xv, d);
    if (record != nullptr) *record = rvf_step_record{r.y, r.e, r.rho, r.gain_norm, r.quad_form};
  });
}

rvf_status rvf_filter_weights(const rvf_filter* filter, double* out, size_t length) {
  RVF_REQUIRE(filter);
  RVF_REQUIRE(out);
  return guarded([&] {
    if (length != filter->filter.length()) throw rvf::InvalidArgument("length mismatch");
    std::memcpy(out, filter->filter.weights().data(), length * sizeof(double));
  });
}

rvf_status rvf_filter_inverse_correlation(const rvf_filter* filter, double* out,
                                          size_t count) {
  RVF_REQUIRE(filter);
  RVF_REQUIRE(out);
  return guarded([&] {
    const std::size_t n = filter->filter.length();
    if (count != n * n) throw rvf::InvalidArgument("count must equal L * L");
    const Eigen::MatrixXd& p = filter->filter.inverse_correlation();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        out[i * n + j] = p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      }
    }
  });
}

rvf_status rvf_rng_create(uint64_t seed, uint64_t trial, uint64_t stream, rvf_rng** out) {
  RVF_REQUIRE(out);
  return guarded([&] { *out = new rvf_rng{rvf::RandomStream(seed, trial, stream)}; });
}

void rvf_rng_destroy(rvf_rng* rng) { delete rng; }

rvf_status rvf_sample_gaussian(rvf_rng* rng, double variance, double* out, size_t count) {
  RVF_REQUIRE(rng);
  RVF_REQUIRE(out);
  return guarded([&] {
    const auto v = rvf::sample_gaussian(variance, count, rng->stream);
    std::memcpy(out, v.data(), count * sizeof(double));
  });
}

rvf_status rvf_sample_sas(rvf_rng* rng, double alpha, double gamma, double* out,
                          size_t count) {
  RVF_REQUIRE(rng);
  RVF_REQUIRE(out);
  return guarded([&] {
    const auto v = rvf::sample_sas({alpha, gamma}, count, rng->stream);
    std::memcpy(out, v.data(), count * sizeof(double));
  });
}

rvf_status rvf_calibrate_snr(double clean_signal_power, double snr_db, double* variance) {
  RVF_REQUIRE(variance);
  return guarded([&] { *variance = rvf::calibrate_snr(clean_signal_power, snr_db); });
}

rvf_status rvf_theory_varphi(const rvf_theory_inputs* inputs, double* out) {
  RVF_REQUIRE(inputs);
  RVF_REQUIRE(out);
  return guarded([&] {
    *out = rvf::varphi({inputs->noise_variance, inputs->lambda, inputs->length, inputs->sigma});
  });
}

rvf_status rvf_theory_predict_emse(const rvf_theory_inputs* inputs, rvf_emse_prediction* out) {
  RVF_REQUIRE(inputs);
  RVF_REQUIRE(out);
  return guarded([&] {
    const rvf::EmsePrediction p = rvf::predict_emse(
        rvf::TheoryInputs{inputs->noise_variance, inputs->lambda, inputs->length, inputs->sigma});
    *out = rvf_emse_prediction{p.emse, p.emse_db, p.varphi};
  });
}

rvf_status rvf_config_load(const char* path, rvf_config** out) {
  RVF_REQUIRE(path);
  RVF_REQUIRE(out);
  return guarded([&] { *out = new rvf_config{rvf::load_config(path)}; });
}

rvf_status rvf_config_parse(const char* text, rvf_config** out) {
  RVF_REQUIRE(text);
  RVF_REQUIRE(out);
  return guarded([&] {
    std::istringstream in(text);
    *out = new rvf_config{rvf::parse_config(in, "<string>")};
  });
}

rvf_status rvf_config_create(rvf_config** out) {
  RVF_REQUIRE(out);
  return guarded([&] { *out = new rvf_config{}; });
}

void rvf_config_destroy(rvf_config* config) { delete config; }

rvf_status rvf_config_set(rvf_config* config, const char* key, const char* value) {
  RVF_REQUIRE(config);
  RVF_REQUIRE(key);
  RVF_REQUIRE(value);
  return guarded([&] { config->config.set(key, value); });
}

rvf_status rvf_config_validate(const rvf_config* config) {
  RVF_REQUIRE(config);
  return guarded([&] { config->config.validate(); });
}

rvf_status rvf_experiment_run(const rvf_config* config, rvf_result** out) {
  RVF_REQUIRE(config);
  RVF_REQUIRE(out);
  return guarded([&] { *out = new rvf_result{rvf::run_experiment(config->config)}; });
}

void rvf_result_destroy(rvf_result* result) { delete result; }

size_t rvf_result_algorithm_count(const rvf_result* result) {
  return result == nullptr ? 0 : result->result.algorithms.size();
}

size_t rvf_result_horizon(const rvf_result* result) {
  return result == nullptr ? 0 : result->result.horizon;
}

rvf_status rvf_result_summary(const rvf_result* result, size_t index, rvf_summary* out) {
  RVF_REQUIRE(result);
  RVF_REQUIRE(out);
  if (rvf_status s = check_index(result, index); s != RVF_OK) return s;
  const rvf::AggregateResult& a = result->result.algorithms[index];
  rvf_summary s{};
  std::strncpy(s.label, a.label.c_str(), sizeof(s.label) - 1);
  s.steady_nmsd_db = a.steady_nmsd_db;
  s.median_steady_nmsd_db = a.median_steady_nmsd_db;
  s.steady_emse_db = a.steady_emse_db;
  s.diverged_trials = a.diverged_trials;
  s.trials = a.trials;
  s.runtime_s = a.runtime_s;
  *out = s;
  g_last_error.clear();
  return RVF_OK;
}

rvf_status rvf_result_nmsd_trace(const rvf_result* result, size_t index, double* out,
                                 size_t count) {
  RVF_REQUIRE(result);
  RVF_REQUIRE(out);
  if (rvf_status s = check_index(result, index); s != RVF_OK) return s;
  const auto& trace = result->result.algorithms[index].nmsd_db;
  if (count != trace.size()) return fail(RVF_INVALID_ARGUMENT, "count must equal horizon");
  std::memcpy(out, trace.data(), count * sizeof(double));
  g_last_error.clear();
  return RVF_OK;
}

double rvf_result_mean_noise_variance(const rvf_result* result) {
  return result == nullptr ? std::numeric_limits<double>::quiet_NaN()
                           : result->result.mean_noise_variance;
}

rvf_status rvf_result_write(const rvf_result* result, const char* dir) {
  RVF_REQUIRE(result);
  RVF_REQUIRE(dir);
  return guarded([&] { rvf::write_experiment(result->result, dir); });
}

rvf_status rvf_result_emit_plot_data(const rvf_result* result, const char* dir) {
  RVF_REQUIRE(result);
  RVF_REQUIRE(dir);
  return guarded([&] { rvf::emit_plot_data(result->result, dir); });
}

rvf_status rvf_sweep_run(const rvf_config* base, const char* parameter, const double* values,
                         size_t count, rvf_sweep** out) {
  RVF_REQUIRE(base);
  RVF_REQUIRE(parameter);
  RVF_REQUIRE(values);
  RVF_REQUIRE(out);
  return guarded([&] {
    rvf::SweepResult sweep =
        rvf::run_sweep(base->config, parameter, std::span<const double>(values, count));
    auto* handle = new rvf_sweep{sweep.parameter, sweep.values, {}};
    for (rvf::ExperimentResult& r : sweep.runs) handle->runs.push_back(rvf_result{std::move(r)});
    *out = handle;
  });
}

void rvf_sweep_destroy(rvf_sweep* sweep) { delete sweep; }

size_t rvf_sweep_size(const rvf_sweep* sweep) {
  return sweep == nullptr ? 0 : sweep->runs.size();
}

const rvf_result* rvf_sweep_result(const rvf_sweep* sweep, size_t index) {
  if (sweep == nullptr || index >= sweep->runs.size()) return nullptr;
  return &sweep->runs[index];
}

rvf_status rvf_sweep_write(const rvf_sweep* sweep, const char* dir) {
  RVF_REQUIRE(sweep);
  RVF_REQUIRE(dir);
  return guarded([&] {
    rvf::SweepResult view{sweep->parameter, sweep->values, {}};
    for (const rvf_result& r : sweep->runs) view.runs.push_back(r.result);
    rvf::write_sweep(view, dir);
  });
}

}  // extern "C"
