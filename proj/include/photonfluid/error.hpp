#pragma once

#include <stdexcept>
#include <string>

namespace photonfluid {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad arguments or configuration (maps to CLI exit code 2).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Numerical breakdown during a computation (exit code 3).
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Propagation produced non-finite values at coordinate z.
class NonFiniteField : public NumericError {
 public:
  explicit NonFiniteField(double z);
  double z() const noexcept { return z_; }

 private:
  double z_;
};

/// File-system or format failure (exit code 4).
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace photonfluid
