#include "rvf/adaptive_filter.hpp"

#include <cmath>
#include <sstream>

#include "rvf/error.hpp"

namespace rvf {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

void validate(const EstimatorSpec& spec) {
  std::visit(Overloaded{
                 [](const PlainRls&) {},
                 [](const GemanMcClure& gm) { gm.params.validate(); },
                 [](const Hampel& h) {
                   h.params.validate();
                   if (h.window == 0) {
                     throw InvalidArgument("Hampel scale window must be >= 1");
                   }
                 },
                 [](const LeastPNorm& lp) {
                   lp.params.validate();
                   if (!(lp.floor > 0.0)) {
                     throw InvalidArgument("p-norm floor must be positive");
                   }
                 },
             },
             spec);
}

std::string describe(const EstimatorSpec& spec) {
  std::ostringstream out;
  std::visit(Overloaded{
                 [&](const PlainRls&) { out << "RLS"; },
                 [&](const GemanMcClure& gm) { out << "GM(sigma=" << gm.params.sigma << ")"; },
                 [&](const Hampel& h) {
                   out << "RLM(" << h.params.t1 << "," << h.params.t2 << ","
                       << h.params.t3 << ";Nw=" << h.window << ")";
                 },
                 [&](const LeastPNorm& lp) { out << "RLpN(p=" << lp.params.p << ")"; },
             },
             spec);
  return out.str();
}

RecursiveFilter::RecursiveFilter(std::size_t length, double lambda, double zeta,
                                 EstimatorSpec estimator)
    : lambda_(lambda), zeta_(zeta), estimator_(std::move(estimator)) {
  if (length == 0) throw InvalidArgument("filter length must be positive");
  if (!(lambda > 0.0 && lambda < 1.0)) {
    throw InvalidArgument("forgetting factor must lie in the open interval (0, 1)");
  }
  if (!(zeta > 0.0) || !std::isfinite(zeta)) {
    throw InvalidArgument("initialization constant zeta must be positive");
  }
  validate(estimator_);
  const auto n = static_cast<Eigen::Index>(length);
  weights_ = KernelVector::Zero(n);
  p_ = Eigen::MatrixXd::Identity(n, n) / zeta;
  px_.resize(n);
  gain_.resize(n);
  if (const auto* h = std::get_if<Hampel>(&estimator_)) {
    scale_.emplace_back(h->window);
  }
}

double RecursiveFilter::weight_for(double e) {
  return std::visit(
      Overloaded{
          [](const PlainRls&) { return 1.0; },
          [e](const GemanMcClure& gm) { return gm_weight(e, gm.params); },
          [this, e](const Hampel& h) {
            RobustScaleWindow& window = scale_.front();
            window.push(e);
            const double scale = window.scale();
            // No usable scale until the window has filled.
            if (!window.full() || !(scale > 0.0)) return 1.0;
            return hampel_weight(e, scale, h.params);
          },
          [e](const LeastPNorm& lp) { return lp_weight(e, lp.params, lp.floor); },
      },
      estimator_);
}

StepRecord RecursiveFilter::step(const Eigen::Ref<const Eigen::VectorXd>& x,
                                 double d) {
  if (x.size() != weights_.size()) {
    throw InvalidArgument("regressor length does not match filter length");
  }
  if (!std::isfinite(d) || !x.allFinite()) {
    throw InvalidInput("non-finite regressor or desired sample");
  }
  ++iteration_;

  StepRecord rec;
  rec.y = weights_.dot(x);
  rec.e = d - rec.y;
  rec.rho = weight_for(rec.e);

  px_.noalias() = p_ * x;
  rec.quad_form = x.dot(px_);
  gain_ = (rec.rho / (lambda_ + rec.rho * rec.quad_form)) * px_;
  rec.gain_norm = gain_.norm();

  weights_ += gain_ * rec.e;
  p_.noalias() -= gain_ * px_.transpose();
  p_ /= lambda_;
  const Eigen::Index n = p_.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double v = 0.5 * (p_(i, j) + p_(j, i));
      p_(i, j) = v;
      p_(j, i) = v;
    }
  }

  if (!weights_.allFinite() || !p_.allFinite()) {
    throw DivergenceError(iteration_, "filter state became non-finite at iteration " +
                                          std::to_string(iteration_));
  }
  return rec;
}

IdentificationTrace run_identification(RecursiveFilter& filter,
                                       const KernelVector& plant,
                                       std::span<const double> inputs,
                                       std::span<const double> noise) {
  if (static_cast<std::size_t>(plant.size()) != filter.length()) {
    throw InvalidArgument("plant length does not match filter length");
  }
  if (inputs.size() != noise.size()) {
    throw InvalidArgument("input and noise sequences differ in length");
  }
  DelayLine line(memory_length_for(filter.length()));
  ExpandedInput x(plant.size());

  IdentificationTrace trace;
  trace.records.reserve(inputs.size());
  trace.deviation.reserve(inputs.size());
  trace.a_priori_error.reserve(inputs.size());
  for (std::size_t n = 0; n < inputs.size(); ++n) {
    if (!std::isfinite(inputs[n])) {
      throw InvalidInput("input sample " + std::to_string(n) + " is not finite");
    }
    line.push(inputs[n]);
    expand_into(line.window(), x);
    const double d = plant.dot(x) + noise[n];
    trace.a_priori_error.push_back(plant.dot(x) - filter.weights().dot(x));
    try {
      trace.records.push_back(filter.step(x, d));
    } catch (const DivergenceError& err) {
      throw DivergenceError(err.iteration(),
                            "identification diverged at step " +
                                std::to_string(err.iteration()) + " (" +
                                describe(filter.estimator()) + ")");
    }
    trace.deviation.push_back((filter.weights() - plant).norm());
  }
  return trace;
}

}  // namespace rvf
