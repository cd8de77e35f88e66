#pragma once

#include <cstddef>
#include <span>

#include "ccnkit/matrix.hpp"
#include "ccnkit/rng.hpp"

namespace ccn {

/// Lower-triangular G with G*G^T = A. Throws FactorizationError (carrying the
/// zero-based pivot) when A is not positive definite, ValidationError when A
/// is not symmetric within 1e-12.
Matrix cholesky(const Matrix& a);

struct SymmetricEigen {
  Vector values;   ///< descending
  Matrix vectors;  ///< column k pairs with values[k]; orthonormal
};

/// Cyclic Jacobi rotations. Stops once the off-diagonal Frobenius norm drops
/// below 1e-12 * ||A||_F or after 100 sweeps. Each eigenvector is signed so its
/// largest-magnitude component is positive.
SymmetricEigen sym_eig(const Matrix& a);

/// n draws of mean + G z with z standard normal; one row per draw.
Matrix mvn_sample(Rng& rng, std::span<const double> mean, const Matrix& chol_lower, std::size_t n);

}  // namespace ccn
