#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <variant>
#include <vector>

namespace rvf {

/// Symmetric alpha-stable law with characteristic function
/// exp(-gamma |w|^alpha). 0 < alpha <= 2, gamma > 0.
struct AlphaStableParams {
  double alpha = 2.0;
  double gamma = 0.5;

  void validate() const;
};

struct GaussianNoise {
  double variance = 1.0;
};

struct AlphaStableNoise {
  AlphaStableParams params;
};

using NoiseModel = std::variant<GaussianNoise, AlphaStableNoise>;

void validate(const NoiseModel& model);

/// SplitMix64 finalizer; used to derive independent per-trial seeds.
std::uint64_t splitmix64(std::uint64_t x);

/// Seed for substream `stream` of trial `trial`. Depends only on its
/// arguments, so trials can run in any order.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t trial,
                          std::uint64_t stream);

/// Single-owner random stream.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}
  RandomStream(std::uint64_t seed, std::uint64_t trial, std::uint64_t stream)
      : engine_(derive_seed(seed, trial, stream)) {}

  double standard_normal() { return normal_(engine_); }
  /// Uniform on the open interval (0, 1).
  double open_uniform();

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

std::vector<double> sample_gaussian(double variance, std::size_t count,
                                    RandomStream& rng);

/// One Chambers-Mallows-Stuck draw (beta = 0) with unit dispersion.
double standard_sas(double alpha, RandomStream& rng);

/// i.i.d. symmetric alpha-stable samples with dispersion gamma, obtained by
/// scaling standard draws by gamma^(1/alpha).
std::vector<double> sample_sas(const AlphaStableParams& params, std::size_t count,
                               RandomStream& rng);

std::vector<double> sample(const NoiseModel& model, std::size_t count,
                           RandomStream& rng);

/// Noise variance giving `snr_db` against a clean signal of the given power.
double calibrate_snr(double clean_signal_power, double snr_db);

}  // namespace rvf
