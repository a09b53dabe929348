#include "rvf/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

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

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& key, const std::string& value) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size() || !std::isfinite(v)) {
    throw ConfigError(fmt::format("{}: '{}' is not a finite number", key, value));
  }
  return v;
}

template <class Int>
Int to_integer(const std::string& key, const std::string& value) {
  Int v = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigError(fmt::format("{}: '{}' is not a non-negative integer", key, value));
  }
  return v;
}

}  // namespace

void ExperimentConfig::set(const std::string& key, const std::string& raw) {
  const std::string value = trim(raw);
  if (key == "plant") {
    plant_source = value;
  } else if (key == "memory_length") {
    memory_length = to_integer<std::size_t>(key, value);
  } else if (key == "algorithms") {
    algorithm_names = split_list(value);
  } else if (key == "sigma") {
    gm.sigma = to_double(key, value);
  } else if (key == "hampel") {
    const auto parts = split_list(value);
    if (parts.size() != 3) throw ConfigError("hampel: expected three thresholds t1, t2, t3");
    hampel = HampelParams{to_double(key, parts[0]), to_double(key, parts[1]),
                          to_double(key, parts[2])};
  } else if (key == "rlm_window") {
    rlm_window = to_integer<std::size_t>(key, value);
  } else if (key == "p") {
    lp.p = to_double(key, value);
  } else if (key == "lp_floor") {
    lp_floor = to_double(key, value);
  } else if (key == "lambda") {
    lambda = to_double(key, value);
  } else if (key == "zeta") {
    zeta = to_double(key, value);
  } else if (key == "noise") {
    if (value == "gaussian") {
      noise.kind = NoiseKind::kGaussian;
    } else if (value == "alpha_stable") {
      noise.kind = NoiseKind::kAlphaStable;
    } else {
      throw ConfigError(fmt::format("noise: unknown model '{}' (gaussian | alpha_stable)", value));
    }
  } else if (key == "snr_db") {
    noise.snr_db = to_double(key, value);
    noise.variance.reset();
  } else if (key == "noise_variance") {
    noise.variance = to_double(key, value);
    noise.snr_db.reset();
  } else if (key == "alpha") {
    noise.stable.alpha = to_double(key, value);
  } else if (key == "gamma") {
    noise.stable.gamma = to_double(key, value);
  } else if (key == "horizon") {
    horizon = to_integer<std::size_t>(key, value);
  } else if (key == "trials") {
    trials = to_integer<std::size_t>(key, value);
  } else if (key == "steady_window") {
    steady_window = to_integer<std::size_t>(key, value);
  } else if (key == "seed") {
    seed = to_integer<std::uint64_t>(key, value);
  } else if (key == "threads") {
    threads = to_integer<std::size_t>(key, value);
  } else {
    throw ConfigError(fmt::format("unknown key '{}'", key));
  }
}

std::size_t ExperimentConfig::effective_steady_window() const {
  if (steady_window != 0) return steady_window;
  return std::max<std::size_t>(1, horizon / 10);
}

void ExperimentConfig::validate() const {
  if (horizon == 0) throw ConfigError("horizon must be positive");
  if (trials == 0) throw ConfigError("trials must be at least 1");
  if (effective_steady_window() >= horizon) {
    throw ConfigError(fmt::format("steady_window {} must be shorter than horizon {}",
                                  effective_steady_window(), horizon));
  }
  if (!seed) {
    throw ConfigError("no seed given (set 'seed' in the config or pass --seed)");
  }
  if (algorithm_names.empty()) throw ConfigError("algorithms list is empty");
  if (!(lambda > 0.0 && lambda < 1.0)) throw ConfigError("lambda must lie in (0, 1)");
  if (!(zeta > 0.0)) throw ConfigError("zeta must be positive");
  if (noise.kind == NoiseKind::kGaussian) {
    if (!noise.snr_db && !noise.variance) {
      throw ConfigError("gaussian noise needs snr_db or noise_variance");
    }
    if (noise.variance && !(*noise.variance > 0.0)) {
      throw ConfigError("noise_variance must be positive");
    }
  } else {
    try {
      noise.stable.validate();
    } catch (const InvalidArgument& e) {
      throw ConfigError(e.what());
    }
  }
  try {
    for (const AlgorithmSpec& a : algorithms()) rvf::validate(a.estimator);
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  if (plant_source == "builtin" && memory_length == 0) {
    throw ConfigError("memory_length must be at least 1");
  }
}

std::vector<AlgorithmSpec> ExperimentConfig::algorithms() const {
  std::vector<AlgorithmSpec> out;
  std::set<std::string> seen;
  for (const std::string& name : algorithm_names) {
    if (!seen.insert(name).second) {
      throw ConfigError(fmt::format("algorithm '{}' listed twice", name));
    }
    if (name == "gm") {
      out.push_back({"GM", GemanMcClure{gm}});
    } else if (name == "rls") {
      out.push_back({"RLS", PlainRls{}});
    } else if (name == "rlm") {
      out.push_back({"RLM", Hampel{hampel, rlm_window}});
    } else if (name == "lpn") {
      out.push_back({"RLpN", LeastPNorm{lp, lp_floor}});
    } else {
      throw ConfigError(fmt::format("unknown algorithm '{}' (gm | rls | rlm | lpn)", name));
    }
  }
  return out;
}

Plant ExperimentConfig::resolve_plant() const {
  if (plant_source == "builtin") {
    try {
      return synthetic_plant(memory_length);
    } catch (const InvalidArgument& e) {
      throw ConfigError(e.what());
    }
  }
  std::filesystem::path path(plant_source);
  if (path.is_relative() && !base_dir.empty()) path = base_dir / path;
  return load_plant(path);
}

ExperimentConfig parse_config(std::istream& in, const std::string& source) {
  ExperimentConfig config;
  std::set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    const std::string text = trim(std::string_view(line).substr(0, hash));
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(fmt::format("{}:{}: expected 'key = value'", source, line_no));
    }
    const std::string key = trim(std::string_view(text).substr(0, eq));
    const std::string value = trim(std::string_view(text).substr(eq + 1));
    if (!seen.insert(key).second) {
      throw ConfigError(fmt::format("{}:{}: key '{}' given twice", source, line_no, key));
    }
    if ((key == "snr_db" && seen.count("noise_variance")) ||
        (key == "noise_variance" && seen.count("snr_db"))) {
      throw ConfigError(fmt::format("{}:{}: give either snr_db or noise_variance, not both",
                                    source, line_no));
    }
    try {
      config.set(key, value);
    } catch (const ConfigError& e) {
      throw ConfigError(fmt::format("{}:{}: {}", source, line_no, e.what()));
    }
  }
  return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  ExperimentConfig config = parse_config(in, path.string());
  config.base_dir = path.parent_path();
  return config;
}

}  // namespace rvf
