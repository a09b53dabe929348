#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "rvf/volterra.hpp"

namespace rvf {

struct Plant {
  std::size_t memory_length = 0;
  KernelVector kernel;
};

/// Built-in test plant (version 1): linear taps exp(-m/2), quadratic taps
/// 0.1 * h1(m1) * h1(m2), scaled to unit clean-output power under
/// unit-variance white Gaussian input.
Plant synthetic_plant(std::size_t memory_length);

/// E[(h^T x(n))^2] for x(n) expanded from unit-variance white Gaussian input.
/// Uses E[x^4] = 3: ||h1||^2 + 2 ||diag h2||^2 + (sum diag h2)^2 + ||offdiag h2||^2.
double clean_output_power(const Plant& plant);

/// Plant file: a header line `M=<int>` followed by L = M(M+3)/2
/// coefficients, one per line, in canonical order. Blank lines and lines
/// starting with '#' are ignored. Errors carry `<source>:<line>:`.
Plant parse_plant(std::istream& in, const std::string& source_name);
Plant load_plant(const std::filesystem::path& path);
void write_plant(std::ostream& out, const Plant& plant);

}  // namespace rvf
