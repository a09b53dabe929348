#include "rvf/noise.hpp"

#include <cmath>
#include <numbers>

#include "rvf/error.hpp"

namespace rvf {

void AlphaStableParams::validate() const {
  if (!(alpha > 0.0 && alpha <= 2.0)) {
    throw InvalidArgument("alpha-stable characteristic exponent must lie in (0, 2]");
  }
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw InvalidArgument("alpha-stable dispersion must be positive");
  }
}

void validate(const NoiseModel& model) {
  if (const auto* g = std::get_if<GaussianNoise>(&model)) {
    if (!(g->variance > 0.0) || !std::isfinite(g->variance)) {
      throw InvalidArgument("Gaussian noise variance must be positive");
    }
  } else {
    std::get<AlphaStableNoise>(model).params.validate();
  }
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t trial,
                          std::uint64_t stream) {
  return splitmix64(splitmix64(seed ^ splitmix64(trial)) ^ (stream + 1));
}

double RandomStream::open_uniform() {
  double u = 0.0;
  do {
    u = uniform_(engine_);
  } while (u <= 0.0);
  return u;
}

std::vector<double> sample_gaussian(double variance, std::size_t count,
                                    RandomStream& rng) {
  if (!(variance > 0.0)) {
    throw InvalidArgument("Gaussian variance must be positive");
  }
  const double sd = std::sqrt(variance);
  std::vector<double> out(count);
  for (double& v : out) v = sd * rng.standard_normal();
  return out;
}

double standard_sas(double alpha, RandomStream& rng) {
  const double v = std::numbers::pi * (rng.open_uniform() - 0.5);
  const double w = -std::log(rng.open_uniform());
  if (alpha == 1.0) return std::tan(v);
  if (alpha == 2.0) return 2.0 * std::sin(v) * std::sqrt(w);
  const double cos_v = std::cos(v);
  return std::sin(alpha * v) / std::pow(cos_v, 1.0 / alpha) *
         std::pow(std::cos(v - alpha * v) / w, (1.0 - alpha) / alpha);
}

std::vector<double> sample_sas(const AlphaStableParams& params, std::size_t count,
                               RandomStream& rng) {
  params.validate();
  const double scale = std::pow(params.gamma, 1.0 / params.alpha);
  std::vector<double> out(count);
  for (double& v : out) v = scale * standard_sas(params.alpha, rng);
  return out;
}

std::vector<double> sample(const NoiseModel& model, std::size_t count,
                           RandomStream& rng) {
  validate(model);
  if (const auto* g = std::get_if<GaussianNoise>(&model)) {
    return sample_gaussian(g->variance, count, rng);
  }
  return sample_sas(std::get<AlphaStableNoise>(model).params, count, rng);
}

double calibrate_snr(double clean_signal_power, double snr_db) {
  if (!(clean_signal_power > 0.0)) {
    throw InvalidArgument("clean signal power must be positive");
  }
  if (!std::isfinite(snr_db)) {
    throw InvalidArgument("SNR must be finite");
  }
  return clean_signal_power / std::pow(10.0, snr_db / 10.0);
}

}  // namespace rvf
