#pragma once

#include <cstddef>
#include <span>

#include "ccnkit/matrix.hpp"

namespace ccn {

/// Features X (n x m) paired with 0/1 labels Y (n x L).
struct Dataset {
  Matrix X;
  Matrix Y;

  std::size_t n() const noexcept { return X.rows(); }
  std::size_t m() const noexcept { return X.cols(); }
  std::size_t L() const noexcept { return Y.cols(); }

  /// Row counts agree, X finite, Y entries exactly 0 or 1.
  void validate() const;
  Dataset subset(std::span<const std::size_t> rows) const;
};

/// Throws ValidationError unless every entry of y is 0 or 1.
void check_binary(const Matrix& y, const char* what = "Y");

}  // namespace ccn
