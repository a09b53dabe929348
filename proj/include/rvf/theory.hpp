#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "rvf/adaptive_filter.hpp"
#include "rvf/noise.hpp"

namespace rvf {

/// Gauss-Hermite rule for expectations under the standard normal law:
/// E[f(Z)] ~= sum_i weights[i] * f(nodes[i]). Weights sum to one.
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Golub-Welsch construction from the probabilists' Hermite recurrence.
GaussHermiteRule gauss_hermite_rule(std::size_t count);

/// Inputs of the steady-state EMSE prediction for the recursive
/// Geman-McClure filter under Gaussian noise.
struct TheoryInputs {
  double noise_variance = 0.0;
  double lambda = 0.99;
  std::size_t length = 14;
  double sigma = 1.0;

  void validate() const;
};

inline constexpr std::size_t kDefaultQuadratureNodes = 64;

/// The steady-state scalar
///   phi = E[ K / (lambda (sigma^2 + xi^2)^2 + K (1 - lambda) L) ]
/// with K = E[(sigma^2 + xi^2)^2] = sigma^4 + 2 sigma^2 s2 + 3 s2^2 for
/// xi ~ N(0, s2). The outer expectation uses Gauss-Hermite quadrature and
/// is cross-checked against a rule with twice the nodes; a relative
/// disagreement above 1e-9 raises NumericalError.
double varphi(const TheoryInputs& inputs,
              std::size_t nodes = kDefaultQuadratureNodes);

/// Same expectation evaluated with a caller-supplied rule, no cross-check.
double varphi_with_rule(const TheoryInputs& inputs, const GaussHermiteRule& rule);

struct EmsePrediction {
  double emse = 0.0;
  double emse_db = 0.0;
  double varphi = 0.0;
};

/// eps = s2 (1-lambda) L phi / (2 - (1-lambda) L phi). Throws
/// InstabilityPredicted when the denominator is not positive.
EmsePrediction predict_emse(const TheoryInputs& inputs,
                            std::size_t nodes = kDefaultQuadratureNodes);

/// Overload for a noise law; only the Gaussian law has a closed-form
/// prediction, alpha-stable input raises InvalidArgument.
EmsePrediction predict_emse(const NoiseModel& noise, double lambda,
                            std::size_t length, double sigma);

/// Monte-Carlo estimate of E[ q / (lambda/rho + q) ] with q = x^T P x, the
/// quantity the mean-convergence condition bounds by one. Samples with
/// rho == 0 contribute zero.
double mean_stability_margin(const Eigen::MatrixXd& p,
                             std::span<const ExpandedInput> x_samples,
                             std::span<const double> rho_samples, double lambda);

/// Same diagnostic using the per-step x^T P(n-1) x recorded by the filter.
double mean_stability_margin(std::span<const StepRecord> records, double lambda);

}  // namespace rvf
