#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "ccnkit/dataset.hpp"
#include "ccnkit/estimators.hpp"
#include "ccnkit/metrics.hpp"
#include "ccnkit/rng.hpp"

namespace ccn {

enum class EstimatorKind { ccn, br, cc_binary, cc_probability };
std::string_view to_string(EstimatorKind k);
/// Accepts "ccn", "br", "cc" (binary propagation) and "cc-prob".
EstimatorKind parse_estimator(std::string_view s);

FittedModel fit_estimator(EstimatorKind kind, const Dataset& data, const FitConfig& config);

struct GridSpec {
  Vector q_values{1.0, 1.5, 2.0, 3.0, 5.0};
  Vector lambda_values{0.0001, 0.001, 0.01, 0.05, 0.1, 0.25};
  std::size_t k_folds = 5;
  MetricKind scoring = MetricKind::hamming;
  std::uint64_t seed = 0;

  void validate() const;
};

/// k disjoint folds covering 0..n-1 after a shuffle; the first n % k folds
/// hold one extra index.
std::vector<std::vector<std::size_t>> kfold_split(std::size_t n, std::size_t k, Rng& rng);

struct GridPoint {
  double q = 1.0;
  double lambda = 0.0;
  bool failed = false;
  /// Mean out-of-fold value of every metric, indexed by MetricKind.
  std::array<double, 5> mean_scores{};

  double mean(MetricKind k) const { return mean_scores[static_cast<std::size_t>(k)]; }
};

struct CvTable {
  std::vector<GridPoint> points;
};

/// Every metric for every grid point from one pass over the folds. q is
/// searched only for CCN; the other estimators use the configured q.
CvTable cross_validate(const Dataset& data, EstimatorKind kind, const GridSpec& grid,
                       const FitConfig& config);

/// Index of the best non-failed point for metric k. Ties go to larger
/// lambda, then smaller q. Throws NumericalError if every point failed.
std::size_t select_best(const CvTable& table, MetricKind k);

struct GridSearchResult {
  double best_q = 1.0;
  double best_lambda = 0.0;
  double best_score = 0.0;
  CvTable table;
};

GridSearchResult grid_search(const Dataset& data, EstimatorKind kind, const GridSpec& grid,
                             const FitConfig& config);

}  // namespace ccn
