#include "ccnkit/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ccnkit/error.hpp"

namespace ccn {

Matrix cholesky(const Matrix& a) {
  if (!is_symmetric(a, 1e-12)) throw ValidationError("cholesky: input is not symmetric");
  const std::size_t n = a.rows();
  Matrix g(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double diag = a(j, j);
    for (std::size_t k = 0; k < j; ++k) diag -= g(j, k) * g(j, k);
    if (!(diag > 0.0)) {
      throw FactorizationError(
          "cholesky: matrix is not positive definite (pivot " + std::to_string(j) + ")", j);
    }
    const double gjj = std::sqrt(diag);
    g(j, j) = gjj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= g(i, k) * g(j, k);
      g(i, j) = s / gjj;
    }
  }
  return g;
}

SymmetricEigen sym_eig(const Matrix& input) {
  if (!is_symmetric(input, 1e-12)) throw ValidationError("sym_eig: input is not symmetric");
  const std::size_t n = input.rows();
  Matrix a = input;
  Matrix v = Matrix::identity(n);
  const double threshold = 1e-12 * std::max(1.0, frobenius(input));

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
  };

  for (int sweep = 0; sweep < 100 && off_norm() > threshold; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });

  SymmetricEigen out{Vector(n), Matrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t src = order[k];
    out.values[k] = a(src, src);
    std::size_t pivot = 0;
    for (std::size_t i = 1; i < n; ++i)
      if (std::abs(v(i, src)) > std::abs(v(pivot, src))) pivot = i;
    const double sign = v(pivot, src) < 0.0 ? -1.0 : 1.0;
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = sign * v(i, src);
  }
  return out;
}

Matrix mvn_sample(Rng& rng, std::span<const double> mean, const Matrix& chol_lower, std::size_t n) {
  const std::size_t m = mean.size();
  if (chol_lower.rows() != m || chol_lower.cols() != m) {
    throw ValidationError("mvn_sample: mean has length " + std::to_string(m) +
                          " but factor is " + std::to_string(chol_lower.rows()) + "x" +
                          std::to_string(chol_lower.cols()));
  }
  Matrix out(n, m);
  Vector z(m);
  for (std::size_t i = 0; i < n; ++i) {
    for (double& zi : z) zi = rng.normal();
    auto row = out.row(i);
    for (std::size_t r = 0; r < m; ++r) {
      double s = mean[r];
      for (std::size_t c = 0; c <= r; ++c) s += chol_lower(r, c) * z[c];
      row[r] = s;
    }
  }
  return out;
}

}  // namespace ccn
