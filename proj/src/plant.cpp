#include "rvf/plant.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>

#include <fmt/format.h>

#include "rvf/error.hpp"

namespace rvf {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

}  // namespace

Plant synthetic_plant(std::size_t memory_length) {
  Plant plant;
  plant.memory_length = memory_length;
  plant.kernel = KernelVector::Zero(static_cast<Eigen::Index>(expanded_length(memory_length)));
  Eigen::Index k = 0;
  for (std::size_t m = 0; m < memory_length; ++m) {
    plant.kernel[k++] = std::exp(-0.5 * static_cast<double>(m));
  }
  for (std::size_t i = 0; i < memory_length; ++i) {
    for (std::size_t j = i; j < memory_length; ++j) {
      plant.kernel[k++] = 0.1 * plant.kernel[static_cast<Eigen::Index>(i)] *
                          plant.kernel[static_cast<Eigen::Index>(j)];
    }
  }
  plant.kernel /= std::sqrt(clean_output_power(plant));
  return plant;
}

double clean_output_power(const Plant& plant) {
  const std::size_t m = plant.memory_length;
  if (static_cast<std::size_t>(plant.kernel.size()) != expanded_length(m)) {
    throw InvalidArgument("plant kernel length does not match its memory length");
  }
  double linear = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    linear += plant.kernel[static_cast<Eigen::Index>(i)] *
              plant.kernel[static_cast<Eigen::Index>(i)];
  }
  double diag_sq = 0.0, diag_sum = 0.0, off_sq = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i; j < m; ++j) {
      const double c = plant.kernel[static_cast<Eigen::Index>(quadratic_index(m, i, j))];
      if (i == j) {
        diag_sq += c * c;
        diag_sum += c;
      } else {
        off_sq += c * c;
      }
    }
  }
  return linear + 2.0 * diag_sq + diag_sum * diag_sum + off_sq;
}

Plant parse_plant(std::istream& in, const std::string& source) {
  Plant plant;
  std::vector<double> coeffs;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    if (!have_header) {
      if (text.rfind("M=", 0) != 0) {
        throw ConfigError(fmt::format("{}:{}: expected header 'M=<int>'", source, line_no));
      }
      const std::string value = trim(std::string_view(text).substr(2));
      std::size_t m = 0;
      auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), m);
      if (ec != std::errc() || ptr != value.data() + value.size() || m == 0) {
        throw ConfigError(fmt::format("{}:{}: invalid memory length '{}'", source, line_no, value));
      }
      plant.memory_length = m;
      have_header = true;
      continue;
    }
    double c = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), c);
    if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(c)) {
      throw ConfigError(fmt::format("{}:{}: invalid coefficient '{}'", source, line_no, text));
    }
    coeffs.push_back(c);
    if (coeffs.size() > expanded_length(plant.memory_length)) {
      throw ConfigError(fmt::format("{}:{}: more than {} coefficients for M={}", source,
                                    line_no, expanded_length(plant.memory_length),
                                    plant.memory_length));
    }
  }
  if (!have_header) {
    throw ConfigError(fmt::format("{}:{}: missing header 'M=<int>'", source, line_no));
  }
  const std::size_t expected = expanded_length(plant.memory_length);
  if (coeffs.size() != expected) {
    throw ConfigError(fmt::format("{}:{}: expected {} coefficients for M={}, found {}",
                                  source, line_no, expected, plant.memory_length,
                                  coeffs.size()));
  }
  plant.kernel = Eigen::Map<const KernelVector>(coeffs.data(),
                                                static_cast<Eigen::Index>(coeffs.size()));
  return plant;
}

Plant load_plant(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open plant file " + path.string());
  return parse_plant(in, path.string());
}

void write_plant(std::ostream& out, const Plant& plant) {
  out << "M=" << plant.memory_length << '\n';
  for (Eigen::Index i = 0; i < plant.kernel.size(); ++i) {
    out << fmt::format("{:.17g}\n", plant.kernel[i]);
  }
}

}  // namespace rvf
