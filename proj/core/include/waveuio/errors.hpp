#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace waveuio {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent configuration (bad JSON, missing keys, empty tables).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Matrix dimensions do not agree with the declared system sizes.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A numerical precondition failed (singular matrix, non-finite input, non-PD operand).
class NumericError : public Error {
 public:
  using Error::Error;
};

/// The requested synthesis problem has no solution in the searched family.
class InfeasibleError : public Error {
 public:
  InfeasibleError(const std::string& what, std::ptrdiff_t nullspace_dim)
      : Error(what), nullspace_dim_(nullspace_dim) {}

  std::ptrdiff_t nullspace_dim() const noexcept { return nullspace_dim_; }

 private:
  std::ptrdiff_t nullspace_dim_;
};

/// Time integration produced non-finite or runaway values.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, long step)
      : Error(what), step_(step) {}

  long step() const noexcept { return step_; }

 private:
  long step_;
};

}  // namespace waveuio
