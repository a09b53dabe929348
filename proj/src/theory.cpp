#include "rvf/theory.hpp"

#include <cmath>
#include <string>

#include "rvf/error.hpp"

namespace rvf {

GaussHermiteRule gauss_hermite_rule(std::size_t count) {
  if (count == 0) throw InvalidArgument("quadrature needs at least one node");
  const auto n = static_cast<Eigen::Index>(count);
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index k = 1; k < n; ++k) {
    const double off = std::sqrt(static_cast<double>(k));
    jacobi(k, k - 1) = off;
    jacobi(k - 1, k) = off;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("Gauss-Hermite eigenproblem failed to converge");
  }
  GaussHermiteRule rule;
  rule.nodes.resize(count);
  rule.weights.resize(count);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double v0 = solver.eigenvectors()(0, i);
    rule.nodes[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);
    rule.weights[static_cast<std::size_t>(i)] = v0 * v0;
  }
  return rule;
}

void TheoryInputs::validate() const {
  if (!(noise_variance > 0.0) || !std::isfinite(noise_variance)) {
    throw InvalidArgument("noise variance must be positive");
  }
  if (!(lambda > 0.0 && lambda < 1.0)) {
    throw InvalidArgument("forgetting factor must lie in (0, 1)");
  }
  if (length == 0) throw InvalidArgument("filter length must be positive");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw InvalidArgument("sigma must be positive");
  }
}

double varphi_with_rule(const TheoryInputs& in, const GaussHermiteRule& rule) {
  in.validate();
  const double s2 = in.sigma * in.sigma;
  const double v = in.noise_variance;
  const double k = s2 * s2 + 2.0 * s2 * v + 3.0 * v * v;
  const double tail = k * (1.0 - in.lambda) * static_cast<double>(in.length);
  const double sd = std::sqrt(v);
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double xi = sd * rule.nodes[i];
    const double q = s2 + xi * xi;
    acc += rule.weights[i] * k / (in.lambda * q * q + tail);
  }
  return acc;
}

double varphi(const TheoryInputs& inputs, std::size_t nodes) {
  const double coarse = varphi_with_rule(inputs, gauss_hermite_rule(nodes));
  const double fine = varphi_with_rule(inputs, gauss_hermite_rule(2 * nodes));
  if (std::abs(coarse - fine) > 1e-9 * std::abs(fine)) {
    throw NumericalError("Gauss-Hermite quadrature did not converge: " +
                         std::to_string(nodes) + " nodes give " +
                         std::to_string(coarse) + ", " + std::to_string(2 * nodes) +
                         " give " + std::to_string(fine));
  }
  return coarse;
}

EmsePrediction predict_emse(const TheoryInputs& inputs, std::size_t nodes) {
  EmsePrediction out;
  out.varphi = varphi(inputs, nodes);
  const double a =
      (1.0 - inputs.lambda) * static_cast<double>(inputs.length) * out.varphi;
  if (!(2.0 - a > 0.0)) {
    throw InstabilityPredicted("(1 - lambda) L phi = " + std::to_string(a) +
                               " is not below 2; no finite steady state");
  }
  out.emse = inputs.noise_variance * a / (2.0 - a);
  out.emse_db = 10.0 * std::log10(out.emse);
  return out;
}

EmsePrediction predict_emse(const NoiseModel& noise, double lambda,
                            std::size_t length, double sigma) {
  const auto* g = std::get_if<GaussianNoise>(&noise);
  if (g == nullptr) {
    throw InvalidArgument(
        "steady-state EMSE prediction requires Gaussian noise (alpha-stable "
        "noise has infinite variance)");
  }
  return predict_emse(TheoryInputs{g->variance, lambda, length, sigma});
}

double mean_stability_margin(const Eigen::MatrixXd& p,
                             std::span<const ExpandedInput> x_samples,
                             std::span<const double> rho_samples, double lambda) {
  if (x_samples.size() != rho_samples.size() || x_samples.empty()) {
    throw InvalidArgument("need matching, non-empty x and rho samples");
  }
  if (p.rows() != p.cols()) throw InvalidArgument("P must be square");
  double acc = 0.0;
  for (std::size_t i = 0; i < x_samples.size(); ++i) {
    const ExpandedInput& x = x_samples[i];
    if (x.size() != p.rows()) throw InvalidArgument("regressor length mismatch");
    const double rho = rho_samples[i];
    if (!(rho > 0.0)) continue;
    const double q = x.dot(p * x);
    acc += q / (lambda / rho + q);
  }
  return acc / static_cast<double>(x_samples.size());
}

double mean_stability_margin(std::span<const StepRecord> records, double lambda) {
  if (records.empty()) throw InvalidArgument("no step records supplied");
  double acc = 0.0;
  for (const StepRecord& r : records) {
    if (!(r.rho > 0.0)) continue;
    acc += r.quad_form / (lambda / r.rho + r.quad_form);
  }
  return acc / static_cast<double>(records.size());
}

}  // namespace rvf
