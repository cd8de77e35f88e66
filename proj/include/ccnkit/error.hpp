#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ccn {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input: shapes, ranges, malformed files. The CLI maps this to exit code 1.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Numerical failure: non-finite objective, failed factorization, no start
/// converged. The CLI maps this to exit code 2.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class FactorizationError : public NumericalError {
 public:
  FactorizationError(const std::string& what, std::size_t pivot)
      : NumericalError(what), pivot_(pivot) {}

  std::size_t pivot() const noexcept { return pivot_; }

 private:
  std::size_t pivot_;
};

}  // namespace ccn
