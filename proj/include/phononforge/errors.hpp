#pragma once

#include <stdexcept>
#include <string>

namespace phononforge {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad caller input: dimensions, ranges, malformed files. CLI exit code 2.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Computation could not produce a trustworthy result. CLI exit code 3.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Probability mass reached the top of the truncated Fock space.
class TruncationError : public NumericalError {
 public:
  TruncationError(const std::string& what, std::size_t required_dim = 0)
      : NumericalError(what), required_dim_(required_dim) {}

  /// Smallest dimension that would pass the check, or 0 when unknown.
  std::size_t required_dim() const noexcept { return required_dim_; }

 private:
  std::size_t required_dim_;
};

/// The conditional state has (numerically) zero norm.
class HeraldingImpossible : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Iterative solver failed to converge.
class NonConvergence : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// File system or parse failure. CLI exit code 4.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace phononforge
