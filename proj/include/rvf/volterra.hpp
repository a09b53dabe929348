#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace rvf {

/// Coefficient and regressor vectors share one canonical layout: the M
/// linear terms first, then the quadratic products (m1, m2) with
/// m1 <= m2 in lexicographic order.
using KernelVector = Eigen::VectorXd;
using ExpandedInput = Eigen::VectorXd;

/// L = M(M+3)/2. Throws InvalidArgument for M == 0.
std::size_t expanded_length(std::size_t memory_length);

/// Position of the quadratic term (m1, m2), m1 <= m2 < M, in the canonical
/// layout.
std::size_t quadratic_index(std::size_t memory_length, std::size_t m1,
                            std::size_t m2);

struct VolterraConfig {
  explicit VolterraConfig(std::size_t memory_length);

  std::size_t memory_length;
  std::size_t expanded_length;
};

/// M-sample input history, newest sample first. Starts at all zeros.
class DelayLine {
 public:
  explicit DelayLine(std::size_t memory_length);

  void push(double sample);
  void reset();

  std::span<const double> window() const { return samples_; }
  std::size_t memory_length() const { return samples_.size(); }

 private:
  std::vector<double> samples_;
};

/// Writes the canonical expansion of `window` into `out` (size L).
void expand_into(std::span<const double> window, Eigen::Ref<Eigen::VectorXd> out);
ExpandedInput expand(std::span<const double> window);

/// Shifts `x_new` into the delay line and returns the expansion of the
/// updated window. Throws InvalidInput for a non-finite sample.
ExpandedInput push_and_expand(DelayLine& line, double x_new);

/// y = h^T x. Throws InvalidArgument on length mismatch.
double filter_output(const KernelVector& kernel, const ExpandedInput& input);

}  // namespace rvf

namespace rvf {

/// Inverse of expanded_length: the M with M(M+3)/2 == L. Throws
/// InvalidArgument when L is not of that form.
std::size_t memory_length_for(std::size_t expanded);

}  // namespace rvf
