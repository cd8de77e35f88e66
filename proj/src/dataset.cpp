#include "ccnkit/dataset.hpp"

#include <cmath>
#include <string>

#include "ccnkit/error.hpp"

namespace ccn {

void check_binary(const Matrix& y, const char* what) {
  for (std::size_t i = 0; i < y.rows(); ++i) {
    for (std::size_t j = 0; j < y.cols(); ++j) {
      const double v = y(i, j);
      if (v != 0.0 && v != 1.0) {
        throw ValidationError(std::string(what) + " must be binary; entry (" + std::to_string(i) +
                              ", " + std::to_string(j) + ") is " + std::to_string(v));
      }
    }
  }
}

void Dataset::validate() const {
  if (X.rows() != Y.rows()) {
    throw ValidationError("X has " + std::to_string(X.rows()) + " rows but Y has " +
                          std::to_string(Y.rows()));
  }
  for (double v : X.data()) {
    if (!std::isfinite(v)) throw ValidationError("X contains a non-finite value");
  }
  check_binary(Y);
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
  return {select_rows(X, rows), select_rows(Y, rows)};
}

}  // namespace ccn
