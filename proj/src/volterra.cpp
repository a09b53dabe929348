#include "rvf/volterra.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rvf/error.hpp"

namespace rvf {

std::size_t expanded_length(std::size_t memory_length) {
  if (memory_length == 0) {
    throw InvalidArgument("memory length M must be at least 1");
  }
  return memory_length * (memory_length + 3) / 2;
}

std::size_t quadratic_index(std::size_t memory_length, std::size_t m1,
                            std::size_t m2) {
  if (m1 > m2 || m2 >= memory_length) {
    throw InvalidArgument("quadratic index requires m1 <= m2 < M");
  }
  // Rows m < m1 of the upper triangle hold (M - m) entries each.
  const std::size_t before = m1 * memory_length - m1 * (m1 - 1) / 2;
  return memory_length + before + (m2 - m1);
}

VolterraConfig::VolterraConfig(std::size_t m)
    : memory_length(m), expanded_length(rvf::expanded_length(m)) {}

DelayLine::DelayLine(std::size_t memory_length) : samples_(memory_length, 0.0) {
  if (memory_length == 0) {
    throw InvalidArgument("delay line needs at least one tap");
  }
}

void DelayLine::push(double sample) {
  std::shift_right(samples_.begin(), samples_.end(), 1);
  samples_.front() = sample;
}

void DelayLine::reset() { std::fill(samples_.begin(), samples_.end(), 0.0); }

void expand_into(std::span<const double> window, Eigen::Ref<Eigen::VectorXd> out) {
  const std::size_t m = window.size();
  if (static_cast<std::size_t>(out.size()) != expanded_length(m)) {
    throw InvalidArgument("output buffer length does not match M(M+3)/2");
  }
  Eigen::Index k = 0;
  for (std::size_t i = 0; i < m; ++i) out[k++] = window[i];
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i; j < m; ++j) out[k++] = window[i] * window[j];
  }
}

ExpandedInput expand(std::span<const double> window) {
  ExpandedInput out(static_cast<Eigen::Index>(expanded_length(window.size())));
  expand_into(window, out);
  return out;
}

ExpandedInput push_and_expand(DelayLine& line, double x_new) {
  if (!std::isfinite(x_new)) {
    throw InvalidInput("input sample is not finite");
  }
  line.push(x_new);
  return expand(line.window());
}

double filter_output(const KernelVector& kernel, const ExpandedInput& input) {
  if (kernel.size() != input.size()) {
    throw InvalidArgument("kernel length " + std::to_string(kernel.size()) +
                          " does not match input length " +
                          std::to_string(input.size()));
  }
  return kernel.dot(input);
}

}  // namespace rvf

namespace rvf {

std::size_t memory_length_for(std::size_t expanded) {
  for (std::size_t m = 1; expanded_length(m) <= expanded; ++m) {
    if (expanded_length(m) == expanded) return m;
  }
  throw InvalidArgument("length " + std::to_string(expanded) +
                        " is not M(M+3)/2 for any M");
}

}  // namespace rvf
