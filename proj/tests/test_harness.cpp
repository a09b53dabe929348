#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "rvf/config.hpp"
#include "rvf/error.hpp"
#include "rvf/harness.hpp"
#include "rvf/noise.hpp"
#include "rvf/plant.hpp"
#include "rvf/report.hpp"

using namespace rvf;
namespace fs = std::filesystem;

namespace {

ExperimentConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in, "test.cfg");
}

std::string error_of(const std::string& text) {
  try {
    parse(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.algorithm_names = {"gm", "rls", "rlm", "lpn"};
  c.noise.snr_db = 25.0;
  c.horizon = 400;
  c.trials = 6;
  c.seed = 99;
  c.threads = 1;
  return c;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("rvf_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("nmsd_db") {
  const std::vector<double> ones{1.0, 1.0};
  CHECK(nmsd_db(ones, 1.0) == 0.0);
  CHECK(nmsd_db(std::vector<double>{0.1}, 1.0) == doctest::Approx(-20.0));
  // Mean first, then the logarithm.
  CHECK(nmsd_db(std::vector<double>{0.01, 0.19}, 1.0) == doctest::Approx(-20.0));
  CHECK(nmsd_db(std::vector<double>{0.0, 0.0}, 1.0) == -INFINITY);
  CHECK_THROWS_AS(nmsd_db(ones, 0.0), InvalidArgument);
}

TEST_CASE("emse_db") {
  std::vector<TrialResult> trials(3);
  for (TrialResult& t : trials) t.a_priori_sq.assign(100, 1e-4);
  trials[1].a_priori_sq.assign(100, 5.0);
  trials[1].a_priori_sq.resize(40);
  trials[1].diverged = true;
  CHECK(emse_db(trials, 20) == doctest::Approx(-40.0));
  for (TrialResult& t : trials) t.diverged = true;
  CHECK_THROWS_AS(emse_db(trials, 20), AllDivergedError);
}

TEST_CASE("config parsing") {
  SUBCASE("well-formed") {
    const ExperimentConfig c = parse(
        "# scenario\n"
        "algorithms = gm, rls, rlm\n"
        "sigma = 0.3   # inline comment\n"
        "noise = alpha_stable\n"
        "alpha = 1.5\n"
        "gamma = 0.1\n"
        "trials = 10\n"
        "horizon = 200\n"
        "seed = 5\n");
    CHECK(c.algorithm_names == std::vector<std::string>{"gm", "rls", "rlm"});
    CHECK(c.gm.sigma == 0.3);
    CHECK(c.noise.kind == NoiseKind::kAlphaStable);
    CHECK(c.noise.stable.alpha == 1.5);
    CHECK(c.trials == 10);
    CHECK(c.effective_steady_window() == 20);
    CHECK(*c.seed == 5);
    CHECK_NOTHROW(c.validate());
    CHECK(c.algorithms().size() == 3);
    CHECK(c.algorithms()[0].label == "GM");
  }
  SUBCASE("errors carry the line number") {
    CHECK(error_of("seed = 1\nbogus = 3\n").find("test.cfg:2:") != std::string::npos);
    CHECK(error_of("seed = 1\nbogus = 3\n").find("bogus") != std::string::npos);
    CHECK(error_of("lambda = abc\n").find("test.cfg:1:") != std::string::npos);
    CHECK(error_of("\n\nno equals sign\n").find("test.cfg:3:") != std::string::npos);
    CHECK(error_of("seed = 1\nseed = 2\n").find("given twice") != std::string::npos);
    CHECK(error_of("snr_db = 10\nnoise_variance = 0.1\n").find("test.cfg:2:") != std::string::npos);
    CHECK(error_of("hampel = 1, 2\n").find("three") != std::string::npos);
  }
  SUBCASE("validation") {
    ExperimentConfig c = parse("snr_db = 20\n");
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c.seed = 1;
    CHECK_NOTHROW(c.validate());
    c.lambda = 1.0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    ExperimentConfig d = parse("seed = 1\n");
    CHECK_THROWS_AS(d.validate(), ConfigError);  // no noise level
    ExperimentConfig e = parse("seed = 1\nsnr_db = 20\nalgorithms = gm, gm\n");
    CHECK_THROWS_AS(e.algorithms(), ConfigError);
    ExperimentConfig f = parse("seed = 1\nsnr_db = 20\nalgorithms = nlms\n");
    CHECK_THROWS_AS(f.algorithms(), ConfigError);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(load_config("/nonexistent/dir/x.cfg"), ConfigError);
  }
}

TEST_CASE("plant files") {
  const Plant p = synthetic_plant(3);
  CHECK(p.kernel.size() == 9);
  CHECK(clean_output_power(p) == doctest::Approx(1.0).epsilon(1e-12));

  std::stringstream s;
  write_plant(s, p);
  const Plant q = parse_plant(s, "round-trip");
  CHECK(q.memory_length == 3);
  CHECK(q.kernel == p.kernel);

  auto plant_error = [](const std::string& text) {
    std::istringstream in(text);
    try {
      parse_plant(in, "p.txt");
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(plant_error("M=1\n0.5\n").find("p.txt:") != std::string::npos);
  CHECK(plant_error("M=1\n0.5\nx\n").find("p.txt:3:") != std::string::npos);
  CHECK(plant_error("0.5\n").find("p.txt:1:") != std::string::npos);
  CHECK(plant_error("M=1\n1\n2\n3\n").find("more than") != std::string::npos);
  CHECK(plant_error("# only comments\n\n").find("missing header") != std::string::npos);
  CHECK_THROWS_AS(load_plant("/nonexistent/plant.txt"), ConfigError);
}

TEST_CASE("clean output power matches sampling") {
  Plant p;
  p.memory_length = 2;
  p.kernel = KernelVector(5);
  p.kernel << 0.7, -0.2, 0.3, 0.5, -0.4;
  RandomStream rng(8);
  DelayLine line(2);
  const int n = 400000;
  double power = 0.0;
  for (int i = 0; i < n; ++i) {
    const double y = p.kernel.dot(push_and_expand(line, rng.standard_normal()));
    power += y * y;
  }
  CHECK(power / n == doctest::Approx(clean_output_power(p)).epsilon(0.02));
}

TEST_CASE("trial streams are paired and seed-determined") {
  const ExperimentConfig c = small_config();
  const Plant plant = c.resolve_plant();
  const TrialStreams a = make_trial_streams(c, plant, 2);
  const TrialStreams b = make_trial_streams(c, plant, 2);
  const TrialStreams other = make_trial_streams(c, plant, 3);
  CHECK(a.input == b.input);
  CHECK(a.noise == b.noise);
  CHECK(a.input != other.input);
  CHECK(a.input.size() == c.horizon);
  CHECK(a.noise_variance > 0.0);
  CHECK(a.noise_variance == doctest::Approx(std::pow(10.0, -2.5)).epsilon(0.25));
}

TEST_CASE("experiments are reproducible and independent of thread count") {
  ExperimentConfig c = small_config();
  const ExperimentResult one = run_experiment(c);
  c.threads = 3;
  const ExperimentResult three = run_experiment(c);
  std::ostringstream a, b;
  write_trace_csv(a, one);
  write_trace_csv(b, three);
  CHECK(a.str() == b.str());
  REQUIRE(one.algorithms.size() == 4);
  for (const AggregateResult& r : one.algorithms) {
    CHECK(r.nmsd_db.size() == c.horizon);
    CHECK(r.trials == c.trials);
    CHECK(r.diverged_trials == 0);
    CHECK(std::isfinite(r.steady_nmsd_db));
    CHECK(r.steady_nmsd_db < -10.0);
  }
  CHECK(one.steady_window == 40);
  CHECK(one.plant_norm > 0.0);

  std::ostringstream header;
  write_summary_csv(header, one);
  CHECK(header.str().rfind("algorithm,steady_nmsd_db,steady_emse_db,diverged_trials,trials,runtime_s\n", 0) == 0);
}

TEST_CASE("report files") {
  ExperimentConfig c = small_config();
  c.algorithm_names = {"gm", "rls"};
  const ExperimentResult r = run_experiment(c);

  SUBCASE("plot data is aligned on iteration") {
    const fs::path dir = scratch("plot");
    const auto files = emit_plot_data(r, dir);
    CHECK(files.size() == 4);
    const std::string csv = slurp(dir / "nmsd.csv");
    CHECK(csv.rfind("iter,GM,RLS\n1,", 0) == 0);
    std::size_t lines = 0;
    for (char ch : csv) lines += ch == '\n';
    CHECK(lines == c.horizon + 1);
    CHECK(slurp(dir / "emse.dat").rfind("# iter GM RLS\n", 0) == 0);
    fs::remove_all(dir);
  }
  SUBCASE("empty result writes nothing") {
    const fs::path dir = scratch("empty");
    CHECK_THROWS_AS(emit_plot_data(ExperimentResult{}, dir), InvalidArgument);
    CHECK_FALSE(fs::exists(dir));
  }
  SUBCASE("unwritable directory") {
    const fs::path blocker = scratch("blocker");
    std::ofstream(blocker) << "file";
    CHECK_THROWS_AS(emit_plot_data(r, blocker / "sub"), IoError);
    fs::remove_all(blocker);
  }
  SUBCASE("experiment bundle") {
    const fs::path dir = scratch("bundle");
    const auto files = write_experiment(r, dir);
    CHECK(files.size() == 6);
    CHECK(slurp(dir / "traces.csv").rfind("iter,algorithm,nmsd_db,emse_db\n1,GM,", 0) == 0);
    fs::remove_all(dir);
  }
}

TEST_CASE("sweep") {
  ExperimentConfig c = small_config();
  c.algorithm_names = {"gm"};
  c.trials = 2;
  c.horizon = 200;
  const std::vector<double> sigmas{0.4, 1.0};
  const SweepResult s = run_sweep(c, "sigma", sigmas);
  REQUIRE(s.runs.size() == 2);
  CHECK(s.runs[0].algorithms[0].description == "GM(sigma=0.4)");
  std::ostringstream out;
  write_sweep_csv(out, s);
  CHECK(out.str().rfind("sigma,algorithm,steady_nmsd_db,median_steady_nmsd_db,steady_emse_db,"
                        "diverged_trials,trials\n0.4,GM,", 0) == 0);
  CHECK_THROWS_AS(run_sweep(c, "sigma", std::vector<double>{}), ConfigError);
  CHECK_THROWS_AS(run_sweep(c, "nonsense", sigmas), ConfigError);
}

TEST_CASE("energy relation holds along a trajectory") {
  const Plant plant = synthetic_plant(2);
  RandomStream in_rng(1), noise_rng(2);
  const auto inputs = sample_gaussian(1.0, 500, in_rng);
  const auto noise = sample_gaussian(0.01, 500, noise_rng);
  for (const EstimatorSpec& spec : {EstimatorSpec{GemanMcClure{{0.5}}}, EstimatorSpec{PlainRls{}},
                                    EstimatorSpec{LeastPNorm{}}}) {
    RecursiveFilter f(plant.kernel.size(), 0.99, 0.01, spec);
    const Trajectory t = record_trajectory(f, plant.kernel, inputs, noise);
    const EnergyCheck e = energy_conservation_check(t);
    CHECK_FALSE(e.skipped);
    CHECK(e.steps_checked == 500);
    CHECK(e.max_residual < 1e-8);
    CHECK(e.max_a_posteriori_residual < 1e-8);
  }

  Trajectory diverged;
  diverged.diverged = true;
  diverged.diverged_at = 7;
  const EnergyCheck skipped = energy_conservation_check(diverged);
  CHECK(skipped.skipped);
  CHECK_FALSE(skipped.reason.empty());
}

TEST_CASE("run_trial records divergence instead of throwing") {
  RecursiveFilter f(2, 1e-200, 0.01, PlainRls{});
  const std::vector<double> inputs(10, 1.0);
  const std::vector<double> noise(10, 1.0);
  TrialResult t;
  CHECK_NOTHROW(t = run_trial(f, KernelVector::Zero(2), inputs, noise));
  CHECK(t.diverged);
  CHECK(t.diverged_at > 0);
  CHECK(t.deviation.size() < 10);
}
