#include "rvf/report.hpp"

#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "rvf/error.hpp"

namespace rvf {

namespace {

namespace fs = std::filesystem;

using Writer = std::function<void(std::ostream&)>;

void ensure_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw IoError(fmt::format("cannot create output directory {}: {}", dir.string(),
                              ec ? ec.message() : "not a directory"));
  }
}

/// Writes every file to a temporary name first and renames only after all
/// of them succeeded.
std::vector<fs::path> write_all(const fs::path& dir,
                                const std::vector<std::pair<std::string, Writer>>& files) {
  ensure_directory(dir);
  std::vector<fs::path> temps;
  auto cleanup = [&] {
    std::error_code ignored;
    for (const fs::path& t : temps) fs::remove(t, ignored);
  };
  for (const auto& [name, writer] : files) {
    const fs::path tmp = dir / (name + ".tmp");
    temps.push_back(tmp);
    std::ofstream out(tmp, std::ios::binary);
    if (out) writer(out);
    out.close();
    if (!out) {
      cleanup();
      throw IoError("cannot write " + (dir / name).string());
    }
  }
  std::vector<fs::path> written;
  for (std::size_t i = 0; i < files.size(); ++i) {
    const fs::path target = dir / files[i].first;
    std::error_code ec;
    fs::rename(temps[i], target, ec);
    if (ec) {
      cleanup();
      throw IoError("cannot write " + target.string() + ": " + ec.message());
    }
    written.push_back(target);
  }
  return written;
}

void write_wide(std::ostream& out, const ExperimentResult& result,
                std::vector<double> AggregateResult::*trace, bool gnuplot) {
  const char* sep = gnuplot ? " " : ",";
  out << (gnuplot ? "# iter" : "iter");
  for (const AggregateResult& a : result.algorithms) out << sep << a.label;
  out << '\n';
  for (std::size_t n = 0; n < result.horizon; ++n) {
    out << n + 1;
    for (const AggregateResult& a : result.algorithms) {
      out << sep << format_value((a.*trace)[n]);
    }
    out << '\n';
  }
}

void write_sweep_rows(std::ostream& out, const SweepResult& sweep, bool gnuplot) {
  const char* sep = gnuplot ? " " : ",";
  out << (gnuplot ? "# " : "") << sweep.parameter << sep << "algorithm" << sep
      << "steady_nmsd_db" << sep << "median_steady_nmsd_db" << sep << "steady_emse_db"
      << sep << "diverged_trials" << sep << "trials\n";
  for (std::size_t i = 0; i < sweep.values.size(); ++i) {
    for (const AggregateResult& a : sweep.runs[i].algorithms) {
      out << format_value(sweep.values[i]) << sep << a.label << sep
          << format_value(a.steady_nmsd_db) << sep << format_value(a.median_steady_nmsd_db)
          << sep << format_value(a.steady_emse_db) << sep << a.diverged_trials << sep
          << a.trials << '\n';
    }
  }
}

void require_traces(const ExperimentResult& result) {
  if (result.algorithms.empty() || result.horizon == 0) {
    throw InvalidArgument("no traces to write");
  }
}

}  // namespace

std::string format_value(double v) { return fmt::format("{:.9g}", v); }

void write_trace_csv(std::ostream& out, const ExperimentResult& result) {
  out << "iter,algorithm,nmsd_db,emse_db\n";
  for (std::size_t n = 0; n < result.horizon; ++n) {
    for (const AggregateResult& a : result.algorithms) {
      out << n + 1 << ',' << a.label << ',' << format_value(a.nmsd_db[n]) << ','
          << format_value(a.emse_db[n]) << '\n';
    }
  }
}

void write_summary_csv(std::ostream& out, const ExperimentResult& result) {
  out << "algorithm,steady_nmsd_db,steady_emse_db,diverged_trials,trials,runtime_s\n";
  for (const AggregateResult& a : result.algorithms) {
    out << a.label << ',' << format_value(a.steady_nmsd_db) << ','
        << format_value(a.steady_emse_db) << ',' << a.diverged_trials << ',' << a.trials
        << ',' << format_value(a.runtime_s) << '\n';
  }
}

void write_sweep_csv(std::ostream& out, const SweepResult& sweep) {
  write_sweep_rows(out, sweep, false);
}

std::vector<fs::path> emit_plot_data(const ExperimentResult& result, const fs::path& dir) {
  require_traces(result);
  return write_all(
      dir, {
               {"nmsd.csv", [&](std::ostream& o) { write_wide(o, result, &AggregateResult::nmsd_db, false); }},
               {"nmsd.dat", [&](std::ostream& o) { write_wide(o, result, &AggregateResult::nmsd_db, true); }},
               {"emse.csv", [&](std::ostream& o) { write_wide(o, result, &AggregateResult::emse_db, false); }},
               {"emse.dat", [&](std::ostream& o) { write_wide(o, result, &AggregateResult::emse_db, true); }},
           });
}

std::vector<fs::path> write_experiment(const ExperimentResult& result, const fs::path& dir) {
  require_traces(result);
  std::vector<fs::path> files = write_all(
      dir, {
               {"traces.csv", [&](std::ostream& o) { write_trace_csv(o, result); }},
               {"summary.csv", [&](std::ostream& o) { write_summary_csv(o, result); }},
           });
  for (fs::path& p : emit_plot_data(result, dir)) files.push_back(std::move(p));
  return files;
}

std::vector<fs::path> write_sweep(const SweepResult& sweep, const fs::path& dir) {
  if (sweep.runs.empty()) throw InvalidArgument("empty sweep");
  return write_all(dir, {
                            {"sweep.csv", [&](std::ostream& o) { write_sweep_rows(o, sweep, false); }},
                            {"sweep.dat", [&](std::ostream& o) { write_sweep_rows(o, sweep, true); }},
                        });
}

}  // namespace rvf
