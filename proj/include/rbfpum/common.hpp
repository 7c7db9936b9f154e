#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace rbfpum {

using Point = Eigen::Vector2d;

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Bad arguments or configuration values (CLI exit code 1).
class ConfigError : public Error {
public:
  using Error::Error;
};

/// Base of the numerical failures (CLI exit code 2).
class NumericalError : public Error {
public:
  using Error::Error;
};

/// A point is not covered by any patch, or a patch is too sparse to solve on.
class CoverageError : public NumericalError {
public:
  using NumericalError::NumericalError;
};

/// A local kernel matrix is numerically singular.
class ConditioningError : public NumericalError {
public:
  ConditioningError(std::size_t patch, const std::string& what)
      : NumericalError(what), patch_(patch) {}
  std::size_t patch() const noexcept { return patch_; }

private:
  std::size_t patch_;
};

/// The global collocation system could not be factorized or solved.
class SolveError : public NumericalError {
public:
  using NumericalError::NumericalError;
};

} // namespace rbfpum
