/*
 * C interface to the robust Volterra filtering library.
 *
 * All functions return an rvf_status. On failure a message describing the
 * last error on the calling thread is available from rvf_last_error().
 * Objects are opaque handles created by *_create / *_load / *_run and
 * released with the matching *_destroy.
 */
#ifndef RVF_RVF_H
#define RVF_RVF_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(RVF_BUILDING_LIBRARY)
#    define RVF_API __declspec(dllexport)
#  else
#    define RVF_API __declspec(dllimport)
#  endif
#else
#  define RVF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rvf_status {
  RVF_OK = 0,
  RVF_INVALID_ARGUMENT = 1,
  RVF_INVALID_INPUT = 2,
  RVF_DIVERGED = 3,
  RVF_NUMERICAL_ERROR = 4,
  RVF_INSTABILITY_PREDICTED = 5,
  RVF_CONFIG_ERROR = 6,
  RVF_IO_ERROR = 7,
  RVF_ALL_DIVERGED = 8,
  RVF_INTERNAL_ERROR = 99
} rvf_status;

RVF_API const char* rvf_status_name(rvf_status status);
/* Message of the most recent failure on this thread ("" if none). */
RVF_API const char* rvf_last_error(void);
RVF_API const char* rvf_version(void);

/* ---- Volterra expansion ------------------------------------------------ */

RVF_API rvf_status rvf_expanded_length(size_t memory_length, size_t* out);

typedef struct rvf_delay_line rvf_delay_line;

RVF_API rvf_status rvf_delay_line_create(size_t memory_length, rvf_delay_line** out);
RVF_API void rvf_delay_line_destroy(rvf_delay_line* line);
/* Pushes x_new and writes the expanded regressor (out_len must equal L). */
RVF_API rvf_status rvf_delay_line_push_and_expand(rvf_delay_line* line, double x_new,
                                                  double* out, size_t out_len);

/* ---- Estimator functions ----------------------------------------------- */

RVF_API rvf_status rvf_gm_loss(double e, double sigma, double* out);
RVF_API rvf_status rvf_gm_score(double e, double sigma, double* out);
RVF_API rvf_status rvf_gm_weight(double e, double sigma, double* out);

/* ---- Adaptive filters -------------------------------------------------- */

typedef enum rvf_estimator_kind {
  RVF_ESTIMATOR_RLS = 0,
  RVF_ESTIMATOR_GEMAN_MCCLURE = 1,
  RVF_ESTIMATOR_HAMPEL = 2,
  RVF_ESTIMATOR_LP = 3
} rvf_estimator_kind;

typedef struct rvf_estimator_spec {
  rvf_estimator_kind kind;
  double sigma;          /* Geman-McClure */
  double hampel[3];      /* t1, t2, t3 */
  size_t hampel_window;  /* N_w */
  double p;              /* least p-norm order */
  double lp_floor;
} rvf_estimator_spec;

/* Fills `out` with the defaults for `kind` (sigma 1, Hampel 0.6/1.3/1.8 with
 * N_w 14, p 1.2 with floor 1e-3). */
RVF_API rvf_status rvf_estimator_spec_default(rvf_estimator_kind kind,
                                              rvf_estimator_spec* out);

typedef struct rvf_step_record {
  double y;
  double e;
  double rho;
  double gain_norm;
  double quad_form;
} rvf_step_record;

typedef struct rvf_filter rvf_filter;

RVF_API rvf_status rvf_filter_create(size_t length, double lambda, double zeta,
                                     const rvf_estimator_spec* estimator,
                                     rvf_filter** out);
RVF_API void rvf_filter_destroy(rvf_filter* filter);
/* On RVF_DIVERGED the handle must not be stepped further. */
RVF_API rvf_status rvf_filter_step(rvf_filter* filter, const double* x, size_t length,
                                   double d, rvf_step_record* record);
RVF_API rvf_status rvf_filter_weights(const rvf_filter* filter, double* out, size_t length);
/* Row-major L x L copy of P(n). */
RVF_API rvf_status rvf_filter_inverse_correlation(const rvf_filter* filter, double* out,
                                                  size_t count);

/* ---- Noise ------------------------------------------------------------- */

typedef struct rvf_rng rvf_rng;

/* Independent stream for (seed, trial, stream). */
RVF_API rvf_status rvf_rng_create(uint64_t seed, uint64_t trial, uint64_t stream,
                                  rvf_rng** out);
RVF_API void rvf_rng_destroy(rvf_rng* rng);
RVF_API rvf_status rvf_sample_gaussian(rvf_rng* rng, double variance, double* out,
                                       size_t count);
RVF_API rvf_status rvf_sample_sas(rvf_rng* rng, double alpha, double gamma, double* out,
                                  size_t count);
RVF_API rvf_status rvf_calibrate_snr(double clean_signal_power, double snr_db,
                                     double* variance);

/* ---- Steady-state theory ----------------------------------------------- */

typedef struct rvf_theory_inputs {
  double noise_variance;
  double lambda;
  size_t length;
  double sigma;
} rvf_theory_inputs;

typedef struct rvf_emse_prediction {
  double emse;
  double emse_db;
  double varphi;
} rvf_emse_prediction;

RVF_API rvf_status rvf_theory_varphi(const rvf_theory_inputs* inputs, double* out);
RVF_API rvf_status rvf_theory_predict_emse(const rvf_theory_inputs* inputs,
                                           rvf_emse_prediction* out);

/* ---- Experiments ------------------------------------------------------- */

typedef struct rvf_config rvf_config;

RVF_API rvf_status rvf_config_load(const char* path, rvf_config** out);
RVF_API rvf_status rvf_config_parse(const char* text, rvf_config** out);
/* Creates a config holding only defaults. */
RVF_API rvf_status rvf_config_create(rvf_config** out);
RVF_API void rvf_config_destroy(rvf_config* config);
/* Sets one key exactly as a `key = value` config line would. */
RVF_API rvf_status rvf_config_set(rvf_config* config, const char* key, const char* value);
RVF_API rvf_status rvf_config_validate(const rvf_config* config);

typedef struct rvf_result rvf_result;

typedef struct rvf_summary {
  char label[32];
  double steady_nmsd_db;
  double median_steady_nmsd_db;
  double steady_emse_db;
  size_t diverged_trials;
  size_t trials;
  double runtime_s;
} rvf_summary;

RVF_API rvf_status rvf_experiment_run(const rvf_config* config, rvf_result** out);
RVF_API void rvf_result_destroy(rvf_result* result);
RVF_API size_t rvf_result_algorithm_count(const rvf_result* result);
RVF_API size_t rvf_result_horizon(const rvf_result* result);
RVF_API rvf_status rvf_result_summary(const rvf_result* result, size_t index,
                                      rvf_summary* out);
/* Per-iteration mean NMSD (dB) of algorithm `index`; count must equal horizon. */
RVF_API rvf_status rvf_result_nmsd_trace(const rvf_result* result, size_t index,
                                         double* out, size_t count);
/* Mean applied Gaussian noise variance (NaN for alpha-stable noise). */
RVF_API double rvf_result_mean_noise_variance(const rvf_result* result);
/* traces.csv, summary.csv, nmsd.csv/.dat, emse.csv/.dat into `dir`. */
RVF_API rvf_status rvf_result_write(const rvf_result* result, const char* dir);
/* Only the plot views. */
RVF_API rvf_status rvf_result_emit_plot_data(const rvf_result* result, const char* dir);

typedef struct rvf_sweep rvf_sweep;

RVF_API rvf_status rvf_sweep_run(const rvf_config* base, const char* parameter,
                                 const double* values, size_t count, rvf_sweep** out);
RVF_API void rvf_sweep_destroy(rvf_sweep* sweep);
RVF_API size_t rvf_sweep_size(const rvf_sweep* sweep);
/* Borrowed view of the run for value `index`; owned by the sweep. */
RVF_API const rvf_result* rvf_sweep_result(const rvf_sweep* sweep, size_t index);
RVF_API rvf_status rvf_sweep_write(const rvf_sweep* sweep, const char* dir);

#ifdef __cplusplus
}
#endif

#endif /* RVF_RVF_H */
