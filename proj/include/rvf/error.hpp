#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rvf {

/// Error categories shared by the C++ core and the C API status codes.
enum class ErrorCode {
  kInvalidArgument = 1,
  kInvalidInput,
  kDiverged,
  kNumerical,
  kInstabilityPredicted,
  kConfig,
  kIo,
  kAllDiverged,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what)
      : Error(ErrorCode::kInvalidArgument, what) {}
};

class InvalidInput : public Error {
 public:
  explicit InvalidInput(const std::string& what)
      : Error(ErrorCode::kInvalidInput, what) {}
};

/// Raised when the filter state stops being finite. `iteration` is the
/// 1-based index of the step that produced the non-finite state.
class DivergenceError : public Error {
 public:
  DivergenceError(std::size_t iteration, const std::string& what)
      : Error(ErrorCode::kDiverged, what), iteration_(iteration) {}

  std::size_t iteration() const noexcept { return iteration_; }

 private:
  std::size_t iteration_;
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what)
      : Error(ErrorCode::kNumerical, what) {}
};

class InstabilityPredicted : public Error {
 public:
  explicit InstabilityPredicted(const std::string& what)
      : Error(ErrorCode::kInstabilityPredicted, what) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what)
      : Error(ErrorCode::kConfig, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorCode::kIo, what) {}
};

class AllDivergedError : public Error {
 public:
  explicit AllDivergedError(const std::string& what)
      : Error(ErrorCode::kAllDiverged, what) {}
};

}  // namespace rvf
