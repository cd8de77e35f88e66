#include "ccnkit/tuning.hpp"

#include <numeric>
#include <string>

namespace ccn {

std::string_view to_string(EstimatorKind k) {
  switch (k) {
    case EstimatorKind::ccn: return "ccn";
    case EstimatorKind::br: return "br";
    case EstimatorKind::cc_binary: return "cc";
    case EstimatorKind::cc_probability: return "cc-prob";
  }
  return "?";
}

EstimatorKind parse_estimator(std::string_view s) {
  for (EstimatorKind k : {EstimatorKind::ccn, EstimatorKind::br, EstimatorKind::cc_binary,
                          EstimatorKind::cc_probability}) {
    if (to_string(k) == s) return k;
  }
  throw ValidationError("unknown method '" + std::string(s) + "'");
}

FittedModel fit_estimator(EstimatorKind kind, const Dataset& data, const FitConfig& config) {
  switch (kind) {
    case EstimatorKind::ccn: return fit_ccn(data, config);
    case EstimatorKind::br: return fit_br(data, config);
    case EstimatorKind::cc_binary: return fit_cc(data, config, Propagation::binary);
    case EstimatorKind::cc_probability: return fit_cc(data, config, Propagation::probability);
  }
  throw ValidationError("unknown estimator");
}

void GridSpec::validate() const {
  if (k_folds < 2) throw ValidationError("k_folds must be at least 2");
  if (q_values.empty() || lambda_values.empty()) throw ValidationError("tuning grids must be non-empty");
  for (double q : q_values)
    if (!(q >= 1.0)) throw ValidationError("grid q values must be >= 1");
  for (double l : lambda_values)
    if (!(l >= 0.0)) throw ValidationError("grid lambda values must be >= 0");
}

std::vector<std::vector<std::size_t>> kfold_split(std::size_t n, std::size_t k, Rng& rng) {
  if (k == 0 || k > n) {
    throw ValidationError("cannot split " + std::to_string(n) + " rows into " + std::to_string(k) + " folds");
  }
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  rng.shuffle(std::span<std::size_t>(idx));
  std::vector<std::vector<std::size_t>> folds(k);
  std::size_t pos = 0;
  for (std::size_t f = 0; f < k; ++f) {
    const std::size_t size = n / k + (f < n % k ? 1 : 0);
    folds[f].assign(idx.begin() + pos, idx.begin() + pos + size);
    pos += size;
  }
  return folds;
}

CvTable cross_validate(const Dataset& data, EstimatorKind kind, const GridSpec& grid,
                       const FitConfig& config) {
  grid.validate();
  data.validate();
  Rng rng(grid.seed);
  const auto folds = kfold_split(data.n(), grid.k_folds, rng);

  std::vector<Dataset> train, test;
  for (std::size_t f = 0; f < folds.size(); ++f) {
    std::vector<std::size_t> rows;
    for (std::size_t g = 0; g < folds.size(); ++g)
      if (g != f) rows.insert(rows.end(), folds[g].begin(), folds[g].end());
    train.push_back(data.subset(rows));
    test.push_back(data.subset(folds[f]));
  }

  const Vector qs = kind == EstimatorKind::ccn ? grid.q_values : Vector{config.loss_spec.q};
  CvTable table;
  for (double q : qs) {
    for (double lambda : grid.lambda_values) {
      GridPoint point{q, lambda, false, {}};
      FitConfig cfg = config;
      cfg.loss_spec.q = q;
      cfg.loss_spec.lambda = lambda;
      try {
        for (std::size_t f = 0; f < folds.size(); ++f) {
          const FittedModel model = fit_estimator(kind, train[f], cfg);
          const Matrix p = model.predict_proba(test[f].X);
          for (MetricKind k : kAllMetrics) {
            point.mean_scores[static_cast<std::size_t>(k)] +=
                score(k, test[f].Y, p, model.activation) / static_cast<double>(folds.size());
          }
        }
      } catch (const NumericalError&) {
        point.failed = true;
      }
      table.points.push_back(point);
    }
  }
  return table;
}

std::size_t select_best(const CvTable& table, MetricKind k) {
  std::size_t best = table.points.size();
  for (std::size_t i = 0; i < table.points.size(); ++i) {
    const GridPoint& p = table.points[i];
    if (p.failed) continue;
    if (best == table.points.size()) {
      best = i;
      continue;
    }
    const GridPoint& b = table.points[best];
    const double s = p.mean(k), sb = b.mean(k);
    if (better(k, s, sb) ||
        (s == sb && (p.lambda > b.lambda || (p.lambda == b.lambda && p.q < b.q)))) {
      best = i;
    }
  }
  if (best == table.points.size()) throw NumericalError("tuning: every grid point failed");
  return best;
}

GridSearchResult grid_search(const Dataset& data, EstimatorKind kind, const GridSpec& grid,
                             const FitConfig& config) {
  GridSearchResult r;
  r.table = cross_validate(data, kind, grid, config);
  const GridPoint& best = r.table.points[select_best(r.table, grid.scoring)];
  r.best_q = best.q;
  r.best_lambda = best.lambda;
  r.best_score = best.mean(grid.scoring);
  return r;
}

}  // namespace ccn
