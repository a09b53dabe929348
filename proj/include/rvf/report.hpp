#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "rvf/harness.hpp"

namespace rvf {

/// `iter,algorithm,nmsd_db,emse_db`, one row per (iteration, algorithm),
/// values with 9 significant digits.
void write_trace_csv(std::ostream& out, const ExperimentResult& result);

/// `algorithm,steady_nmsd_db,steady_emse_db,diverged_trials,trials,runtime_s`
void write_summary_csv(std::ostream& out, const ExperimentResult& result);

/// `<parameter>,algorithm,steady_nmsd_db,median_steady_nmsd_db,steady_emse_db,diverged_trials,trials`
void write_sweep_csv(std::ostream& out, const SweepResult& sweep);

/// Plot-ready views: `nmsd.csv`/`nmsd.dat` and `emse.csv`/`emse.dat`, each
/// with one column per algorithm aligned on iteration. The `.dat` files are
/// whitespace separated with a `#` header. Throws InvalidArgument for an
/// empty result (nothing is written) and IoError when the directory cannot
/// be written. Returns the files produced.
std::vector<std::filesystem::path> emit_plot_data(const ExperimentResult& result,
                                                  const std::filesystem::path& dir);

/// traces.csv, summary.csv and the plot views.
std::vector<std::filesystem::path> write_experiment(const ExperimentResult& result,
                                                    const std::filesystem::path& dir);

/// sweep.csv and sweep.dat.
std::vector<std::filesystem::path> write_sweep(const SweepResult& sweep,
                                               const std::filesystem::path& dir);

/// Formats with 9 significant digits; infinities print as inf / -inf.
std::string format_value(double v);

}  // namespace rvf
