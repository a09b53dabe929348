#pragma once

#include <cstddef>
#include <deque>
#include <vector>

namespace rvf {

/// Geman-McClure shape constant sigma > 0.
struct GemanMcClureParams {
  double sigma = 1.0;

  void validate() const;
};

/// Three-part redescending thresholds, expressed in units of the robust
/// error scale. 0 < t1 < t2 < t3.
struct HampelParams {
  double t1 = 0.6;
  double t2 = 1.3;
  double t3 = 1.8;

  void validate() const;
};

/// Moment order of the least p-norm weighting, 1 < p <= 2.
struct LpParams {
  double p = 1.2;

  void validate() const;
};

/// e^2 / (sigma^2 + e^2)
double gm_loss(double e, const GemanMcClureParams& params);

/// d/de of gm_loss: 2 sigma^2 e / (sigma^2 + e^2)^2
double gm_score(double e, const GemanMcClureParams& params);

/// Recursion weight sigma^2 / (sigma^2 + e^2)^2.
double gm_weight(double e, const GemanMcClureParams& params);

/// Hampel weight psi(e)/e. Flat up to t1*scale, 1/|e| clipping up to
/// t2*scale, linear redescent to zero at t3*scale, zero beyond.
double hampel_weight(double e, double scale, const HampelParams& params);

/// (max(|e|, floor))^(p-2)
double lp_weight(double e, const LpParams& params, double floor);

/// Sliding window of recent absolute errors with the normalized-MAD style
/// scale 1.483 * median.
class RobustScaleWindow {
 public:
  static constexpr double kMedianToSigma = 1.483;

  explicit RobustScaleWindow(std::size_t capacity);

  void push(double abs_error);
  bool full() const { return recent_.size() == capacity_; }
  std::size_t size() const { return recent_.size(); }
  std::size_t capacity() const { return capacity_; }

  /// 1.483 * median of the stored values; 0 when empty.
  double scale() const;

 private:
  std::size_t capacity_;
  std::deque<double> recent_;
  mutable std::vector<double> scratch_;
};

}  // namespace rvf
