#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "rvf/estimators.hpp"
#include "rvf/volterra.hpp"

namespace rvf {

struct PlainRls {};

struct GemanMcClure {
  GemanMcClureParams params;
};

struct Hampel {
  HampelParams params;
  std::size_t window = 14;
};

struct LeastPNorm {
  LpParams params;
  double floor = 1e-3;
};

using EstimatorSpec = std::variant<PlainRls, GemanMcClure, Hampel, LeastPNorm>;

void validate(const EstimatorSpec& spec);
std::string describe(const EstimatorSpec& spec);

inline constexpr double kDefaultZeta = 0.01;

struct StepRecord {
  double y = 0.0;          ///< filter output with the previous weights
  double e = 0.0;          ///< prior error d - y
  double rho = 0.0;        ///< per-sample weight
  double gain_norm = 0.0;  ///< ||Psi(n)||_2
  double quad_form = 0.0;  ///< x^T P(n-1) x
};

/// Exponentially weighted recursive least squares with a per-sample weight
/// rho(e) supplied by the estimator. PlainRls gives the conventional
/// algorithm; GemanMcClure gives the recursive Geman-McClure filter.
///
/// Each step: prior error with the old weights, weight rho at that error,
/// gain Psi = rho P x / (lambda + rho x^T P x), h += Psi e, then
/// P = (P - Psi x^T P) / lambda followed by re-symmetrization.
class RecursiveFilter {
 public:
  RecursiveFilter(std::size_t length, double lambda, double zeta,
                  EstimatorSpec estimator);

  /// Throws InvalidInput for non-finite x or d, InvalidArgument for a length
  /// mismatch and DivergenceError when the updated state is not finite.
  StepRecord step(const Eigen::Ref<const Eigen::VectorXd>& x, double d);

  const KernelVector& weights() const { return weights_; }
  const Eigen::MatrixXd& inverse_correlation() const { return p_; }
  double lambda() const { return lambda_; }
  double zeta() const { return zeta_; }
  std::size_t length() const { return static_cast<std::size_t>(weights_.size()); }
  std::size_t iteration() const { return iteration_; }
  const EstimatorSpec& estimator() const { return estimator_; }

 private:
  double weight_for(double e);

  double lambda_;
  double zeta_;
  EstimatorSpec estimator_;
  KernelVector weights_;
  Eigen::MatrixXd p_;
  Eigen::VectorXd px_;
  Eigen::VectorXd gain_;
  std::vector<RobustScaleWindow> scale_;  // populated for Hampel only
  std::size_t iteration_ = 0;
};

struct IdentificationTrace {
  std::vector<StepRecord> records;
  std::vector<double> deviation;      ///< ||h(n) - h_o||_2 after each step
  std::vector<double> a_priori_error;  ///< x^T (h_o - h(n-1))
};

/// Drives `filter` with d(n) = h_o^T x(n) + noise(n) where x(n) is the
/// expansion of the scalar input stream. Divergence is rethrown with the
/// iteration index in the message.
IdentificationTrace run_identification(RecursiveFilter& filter,
                                       const KernelVector& plant,
                                       std::span<const double> inputs,
                                       std::span<const double> noise);

}  // namespace rvf
