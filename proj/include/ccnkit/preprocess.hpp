#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "ccnkit/matrix.hpp"

namespace ccn {

/// Column centering/scaling followed by an optional projection onto leading
/// principal components. Learned on training rows, reusable on any rows.
struct FeatureTransform {
  bool standardize = false;
  Vector means;
  Vector sds;          ///< 1 for every column when not standardizing
  Matrix components;   ///< m x k, columns are eigenvectors; empty without PCA
  Vector eigenvalues;  ///< all m, descending; empty without PCA
  double variance_fraction = 0.0;

  bool has_pca() const noexcept { return components.cols() > 0; }
  std::size_t n_inputs() const noexcept { return means.size(); }
  std::size_t n_outputs() const noexcept { return has_pca() ? components.cols() : means.size(); }
  /// Cumulative explained-variance share of the retained components.
  double retained_fraction() const;

  Matrix apply(const Matrix& x) const;
};

/// Sample sds use n - 1. PCA diagonalizes the sample covariance of the
/// scaled columns (the correlation matrix when standardizing) and keeps the
/// smallest k whose cumulative share reaches `pca_fraction`.
/// `names` label columns in error messages (defaults to x1..xm).
FeatureTransform fit_transform(const Matrix& x, bool standardize, std::optional<double> pca_fraction,
                               const std::vector<std::string>& names = {});

nlohmann::json transform_to_json(const FeatureTransform& t);
FeatureTransform transform_from_json(const nlohmann::json& doc);

}  // namespace ccn
