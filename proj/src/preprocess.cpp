#include "ccnkit/preprocess.hpp"

#include <algorithm>
#include <cmath>

#include "ccnkit/error.hpp"
#include "ccnkit/linalg.hpp"

namespace ccn {

double FeatureTransform::retained_fraction() const {
  if (!has_pca()) return 1.0;
  double total = 0.0, kept = 0.0;
  for (std::size_t j = 0; j < eigenvalues.size(); ++j) {
    const double v = std::max(eigenvalues[j], 0.0);
    total += v;
    if (j < components.cols()) kept += v;
  }
  return total > 0.0 ? kept / total : 1.0;
}

Matrix FeatureTransform::apply(const Matrix& x) const {
  if (x.cols() != n_inputs()) {
    throw ValidationError("transform expects " + std::to_string(n_inputs()) + " columns, got " +
                          std::to_string(x.cols()));
  }
  Matrix z(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) z(i, j) = (x(i, j) - means[j]) / sds[j];
  return has_pca() ? z * components : z;
}

FeatureTransform fit_transform(const Matrix& x, bool standardize, std::optional<double> pca_fraction,
                               const std::vector<std::string>& names) {
  const std::size_t n = x.rows(), m = x.cols();
  if (!standardize && !pca_fraction) throw ValidationError("preprocess: nothing to do (request standardization or PCA)");
  if (pca_fraction && !(*pca_fraction > 0.0 && *pca_fraction <= 1.0))
    throw ValidationError("preprocess: PCA variance fraction must lie in (0, 1]");
  if (n < 2) throw ValidationError("preprocess: need at least 2 rows");
  if (m == 0) throw ValidationError("preprocess: no feature columns");

  FeatureTransform t;
  t.standardize = standardize;
  t.means.assign(m, 0.0);
  t.sds.assign(m, 1.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) t.means[j] += x(i, j);
  for (double& v : t.means) v /= static_cast<double>(n);
  if (standardize) {
    for (std::size_t j = 0; j < m; ++j) {
      double ss = 0.0;
      for (std::size_t i = 0; i < n; ++i) ss += (x(i, j) - t.means[j]) * (x(i, j) - t.means[j]);
      t.sds[j] = std::sqrt(ss / static_cast<double>(n - 1));
      if (!(t.sds[j] > 0.0)) {
        const std::string name = j < names.size() ? names[j] : "x" + std::to_string(j + 1);
        throw ValidationError("preprocess: column '" + name + "' is constant and cannot be standardized");
      }
    }
  }
  if (!pca_fraction) return t;

  const Matrix z = t.apply(x);
  Matrix cov = z.transpose() * z;
  for (double& v : cov.data()) v /= static_cast<double>(n - 1);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < a; ++b) cov(a, b) = cov(b, a) = 0.5 * (cov(a, b) + cov(b, a));
  const SymmetricEigen eig = sym_eig(cov);
  t.eigenvalues = eig.values;
  t.variance_fraction = *pca_fraction;

  double total = 0.0;
  for (double v : eig.values) total += std::max(v, 0.0);
  std::size_t k = 0;
  double cum = 0.0;
  while (k < m) {
    cum += std::max(eig.values[k], 0.0);
    ++k;
    if (total <= 0.0 || cum / total >= *pca_fraction) break;
  }
  std::vector<std::size_t> keep(k);
  for (std::size_t j = 0; j < k; ++j) keep[j] = j;
  t.components = select_cols(eig.vectors, keep);
  return t;
}

nlohmann::json transform_to_json(const FeatureTransform& t) {
  nlohmann::json doc{{"standardize", t.standardize}, {"means", t.means}, {"sds", t.sds}};
  if (t.has_pca()) {
    doc["pca"] = {{"variance_fraction", t.variance_fraction},
                  {"eigenvalues", t.eigenvalues},
                  {"retained", t.components.cols()},
                  {"retained_fraction", t.retained_fraction()},
                  {"components", {{"rows", t.components.rows()},
                                  {"cols", t.components.cols()},
                                  {"data", t.components.storage()}}}};
  }
  return doc;
}

FeatureTransform transform_from_json(const nlohmann::json& doc) {
  FeatureTransform t;
  try {
    t.standardize = doc.at("standardize").get<bool>();
    t.means = doc.at("means").get<Vector>();
    t.sds = doc.at("sds").get<Vector>();
    if (doc.contains("pca")) {
      const auto& p = doc.at("pca");
      t.variance_fraction = p.at("variance_fraction").get<double>();
      t.eigenvalues = p.at("eigenvalues").get<Vector>();
      const auto& c = p.at("components");
      t.components = Matrix::from_data(c.at("rows").get<std::size_t>(), c.at("cols").get<std::size_t>(),
                                       c.at("data").get<Vector>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("transform file: ") + e.what());
  }
  if (t.sds.size() != t.means.size() || (t.has_pca() && t.components.rows() != t.means.size()))
    throw ValidationError("transform file: inconsistent dimensions");
  return t;
}

}  // namespace ccn
