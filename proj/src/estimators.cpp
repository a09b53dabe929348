#include "rvf/estimators.hpp"

#include <algorithm>
#include <cmath>

#include "rvf/error.hpp"

namespace rvf {

void GemanMcClureParams::validate() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw InvalidArgument("Geman-McClure sigma must be positive and finite");
  }
}

void HampelParams::validate() const {
  if (!(t1 > 0.0 && t1 < t2 && t2 < t3) || !std::isfinite(t3)) {
    throw InvalidArgument("Hampel thresholds must satisfy 0 < t1 < t2 < t3");
  }
}

void LpParams::validate() const {
  if (!(p > 1.0 && p <= 2.0)) {
    throw InvalidArgument("p-norm order must lie in (1, 2]");
  }
}

double gm_loss(double e, const GemanMcClureParams& params) {
  const double e2 = e * e;
  return e2 / (params.sigma * params.sigma + e2);
}

double gm_score(double e, const GemanMcClureParams& params) {
  const double s2 = params.sigma * params.sigma;
  const double denom = s2 + e * e;
  return 2.0 * s2 * e / (denom * denom);
}

double gm_weight(double e, const GemanMcClureParams& params) {
  const double s2 = params.sigma * params.sigma;
  const double denom = s2 + e * e;
  return s2 / (denom * denom);
}

double hampel_weight(double e, double scale, const HampelParams& params) {
  if (!(scale > 0.0)) {
    throw InvalidArgument("Hampel scale must be positive");
  }
  const double a = params.t1 * scale;
  const double b = params.t2 * scale;
  const double c = params.t3 * scale;
  const double abs_e = std::abs(e);
  if (abs_e <= a) return 1.0;
  if (abs_e <= b) return a / abs_e;
  if (abs_e < c) return a * (c - abs_e) / ((c - b) * abs_e);
  return 0.0;
}

double lp_weight(double e, const LpParams& params, double floor) {
  if (!(floor > 0.0)) {
    throw InvalidArgument("p-norm weight floor must be positive");
  }
  return std::pow(std::max(std::abs(e), floor), params.p - 2.0);
}

RobustScaleWindow::RobustScaleWindow(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) {
    throw InvalidArgument("robust scale window needs at least one slot");
  }
  scratch_.reserve(capacity);
}

void RobustScaleWindow::push(double abs_error) {
  if (recent_.size() == capacity_) recent_.pop_front();
  recent_.push_back(std::abs(abs_error));
}

double RobustScaleWindow::scale() const {
  if (recent_.empty()) return 0.0;
  scratch_.assign(recent_.begin(), recent_.end());
  const std::size_t mid = scratch_.size() / 2;
  std::nth_element(scratch_.begin(), scratch_.begin() + mid, scratch_.end());
  double median = scratch_[mid];
  if (scratch_.size() % 2 == 0) {
    const double lower = *std::max_element(scratch_.begin(), scratch_.begin() + mid);
    median = 0.5 * (median + lower);
  }
  return kMedianToSigma * median;
}

}  // namespace rvf
