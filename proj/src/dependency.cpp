#include "ccnkit/dependency.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ccnkit/parallel.hpp"
#include "ccnkit/special.hpp"

namespace ccn {

namespace {

struct Table2x2 {
  double n11 = 0, n10 = 0, n01 = 0, n00 = 0;
};

Table2x2 cross_table(const Matrix& y, std::size_t a, std::size_t b) {
  Table2x2 t;
  for (std::size_t i = 0; i < y.rows(); ++i) {
    const bool ya = y(i, a) != 0.0, yb = y(i, b) != 0.0;
    if (ya && yb) ++t.n11;
    else if (ya) ++t.n10;
    else if (yb) ++t.n01;
    else ++t.n00;
  }
  return t;
}

void check_pairs(const Matrix& y) {
  check_binary(y);
  if (y.cols() < 2) throw ValidationError("pairwise label measures need at least 2 labels");
  if (y.rows() == 0) throw ValidationError("pairwise label measures need at least one row");
}

Vector intercept_only(std::span<const double> y_train, std::size_t n_test) {
  double mean = 0.0;
  for (double v : y_train) mean += v;
  mean /= static_cast<double>(y_train.size());
  return Vector(n_test, std::clamp(mean, kProbClip, 1.0 - kProbClip));
}

Vector predict_single(const OptimizerResult& fit, const Matrix& x) {
  const ModelParams p = ModelParams::from_flat(fit.x, 1, x.cols());
  return forward(p, x, Activation::sigmoid).p.col(0);
}

double single_score(MetricKind k, std::span<const double> y, std::span<const double> p) {
  return score(k, Matrix::from_data(y.size(), 1, Vector(y.begin(), y.end())),
               Matrix::from_data(p.size(), 1, Vector(p.begin(), p.end())));
}

// Held-out probabilities of one label's penalized logistic regression, with
// lambda chosen by inner cross-validation on the training rows.
Vector tuned_logistic(const Matrix& x_train, std::span<const double> y_train, const Matrix& x_test,
                      const std::vector<std::vector<std::size_t>>& inner, const CdepConfig& config,
                      bool& fell_back) {
  LossSpec spec;
  double best_score = 0.0, best_lambda = 0.0;
  bool have = false;
  for (double lambda : config.lambda_grid) {
    spec.lambda = lambda;
    double total = 0.0;
    bool ok = true;
    for (std::size_t f = 0; f < inner.size() && ok; ++f) {
      std::vector<std::size_t> rows;
      for (std::size_t g = 0; g < inner.size(); ++g)
        if (g != f) rows.insert(rows.end(), inner[g].begin(), inner[g].end());
      Vector y_fit(rows.size()), y_held(inner[f].size());
      for (std::size_t i = 0; i < rows.size(); ++i) y_fit[i] = y_train[rows[i]];
      for (std::size_t i = 0; i < inner[f].size(); ++i) y_held[i] = y_train[inner[f][i]];
      try {
        const auto fit = fit_single_label(select_rows(x_train, rows), y_fit, spec, Activation::sigmoid,
                                          config.optimizer);
        total += single_score(config.metric, y_held, predict_single(fit, select_rows(x_train, inner[f])));
      } catch (const NumericalError&) {
        ok = false;
      }
    }
    if (!ok) continue;
    const double mean = total / static_cast<double>(inner.size());
    if (!have || better(config.metric, mean, best_score) || (mean == best_score && lambda > best_lambda)) {
      best_score = mean;
      best_lambda = lambda;
      have = true;
    }
  }
  if (have) {
    spec.lambda = best_lambda;
    try {
      return predict_single(fit_single_label(x_train, y_train, spec, Activation::sigmoid, config.optimizer),
                            x_test);
    } catch (const NumericalError&) {
    }
  }
  fell_back = true;
  return intercept_only(y_train, x_test.rows());
}

double mean_or_nan(double sum, std::size_t count) {
  return count ? sum / static_cast<double>(count) : std::numeric_limits<double>::quiet_NaN();
}

std::optional<SpearmanResult> spearman_finite(const std::vector<DgpRow>& rows, double DgpRow::*field) {
  Vector a, b;
  for (const DgpRow& r : rows) {
    if (r.reps_used == 0 || !std::isfinite(r.*field)) continue;
    a.push_back(r.*field);
    b.push_back(r.excess_hamming);
  }
  return spearman(a, b);
}

}  // namespace

double label_density(const Matrix& y) {
  check_binary(y);
  if (y.empty()) throw ValidationError("label density of an empty label matrix");
  double ones = 0.0;
  for (double v : y.data()) ones += v;
  const double total = static_cast<double>(y.size());
  // Round only the majority share; 1 - share is then exact, so negating Y
  // gives exactly 1 - d in both directions.
  const double share = std::max(ones, total - ones) / total;
  return ones >= total - ones ? share : 1.0 - share;
}

std::optional<double> label_dependency(const Matrix& y) {
  check_pairs(y);
  const double n = static_cast<double>(y.rows());
  double num = 0.0, den = 0.0;
  for (std::size_t k = 1; k < y.cols(); ++k) {
    for (std::size_t l = 0; l < k; ++l) {
      const Table2x2 t = cross_table(y, k, l);
      const double nk = t.n11 + t.n10, nl = t.n11 + t.n01;
      if (nk == 0.0 || nk == n || nl == 0.0 || nl == n) continue;
      const double rho = (n * t.n11 - nk * nl) / std::sqrt(nk * (n - nk) * nl * (n - nl));
      num += std::abs(rho) * t.n11;
      den += t.n11;
    }
  }
  if (den == 0.0) return std::nullopt;
  return num / den;
}

double chi2_statistic(const Matrix& y, std::size_t a, std::size_t b) {
  const Table2x2 t = cross_table(y, a, b);
  const double r1 = t.n11 + t.n10, r0 = t.n01 + t.n00;
  const double c1 = t.n11 + t.n01, c0 = t.n10 + t.n00;
  if (r1 == 0.0 || r0 == 0.0 || c1 == 0.0 || c0 == 0.0) return 0.0;
  const double d = t.n11 * t.n00 - t.n10 * t.n01;
  // Pairwise products keep the value bit-identical when both labels are negated.
  return (r1 + r0) * (d * d) / ((r1 * r0) * (c1 * c0));
}

double unconditional_dependency(const Matrix& y, double alpha) {
  check_pairs(y);
  std::size_t flagged = 0, pairs = 0;
  for (std::size_t k = 1; k < y.cols(); ++k) {
    for (std::size_t l = 0; l < k; ++l) {
      ++pairs;
      if (chi2_sf_1dof(chi2_statistic(y, k, l)) <= alpha) ++flagged;
    }
  }
  return static_cast<double>(flagged) / static_cast<double>(pairs);
}

void CdepConfig::validate() const {
  optimizer.validate();
  if (outer_folds < 2 || inner_folds < 2) throw ValidationError("fold counts must be at least 2");
  if (lambda_grid.empty()) throw ValidationError("lambda grid must be non-empty");
  for (double l : lambda_grid)
    if (!(l >= 0.0)) throw ValidationError("lambda values must be >= 0");
}

CdepResult conditional_dependency(const Dataset& data, const CdepConfig& config) {
  config.validate();
  data.validate();
  const std::size_t n = data.n(), l = data.L();
  if (l < 2) throw ValidationError("conditional dependency needs at least 2 labels");
  if (n < config.outer_folds) {
    throw ValidationError(std::to_string(n) + " rows cannot fill " + std::to_string(config.outer_folds) +
                          " outer folds");
  }
  Rng rng(config.seed);
  const auto outer = kfold_split(n, config.outer_folds, rng);
  Matrix p_without(n, l), p_with(n, l);
  CdepResult result;

  for (std::size_t f = 0; f < outer.size(); ++f) {
    std::vector<std::size_t> train_rows;
    for (std::size_t g = 0; g < outer.size(); ++g)
      if (g != f) train_rows.insert(train_rows.end(), outer[g].begin(), outer[g].end());
    const Dataset train = data.subset(train_rows), test = data.subset(outer[f]);
    Rng inner_rng(derive_seed(config.seed, f + 1));
    const auto inner = kfold_split(train.n(), config.inner_folds, inner_rng);

    for (std::size_t k = 0; k < l; ++k) {
      std::vector<std::size_t> others;
      for (std::size_t j = 0; j < l; ++j)
        if (j != k) others.push_back(j);
      const Vector y_train = train.Y.col(k);
      bool fell_back = false;
      const Vector without = tuned_logistic(train.X, y_train, test.X, inner, config, fell_back);
      result.fallbacks += fell_back;
      fell_back = false;
      const Vector with = tuned_logistic(hstack(train.X, select_cols(train.Y, others)), y_train,
                                         hstack(test.X, select_cols(test.Y, others)), inner, config,
                                         fell_back);
      result.fallbacks += fell_back;
      for (std::size_t i = 0; i < outer[f].size(); ++i) {
        p_without(outer[f][i], k) = without[i];
        p_with(outer[f][i], k) = with[i];
      }
    }
  }

  result.performance_without = score(config.metric, data.Y, p_without);
  result.performance_with = score(config.metric, data.Y, p_with);
  result.raw_difference = result.performance_with - result.performance_without;
  result.score = lower_is_better(config.metric) ? 0.0 - result.raw_difference : result.raw_difference;
  return result;
}

DependencyReport dependency_report(const Dataset& data, const CdepConfig& config) {
  data.validate();
  DependencyReport r;
  r.config = config;
  r.label_density = label_density(data.Y);
  if (data.L() >= 2) {
    r.label_dependency = label_dependency(data.Y);
    r.unconditional_dependency = unconditional_dependency(data.Y);
    r.conditional_dependency = conditional_dependency(data, config);
  }
  return r;
}

DgpRow validation_row(const ValidationConfig& config, std::size_t dgp) {
  const std::uint64_t dgp_seed = derive_seed(config.seed, dgp);
  Rng design_rng(derive_seed(dgp_seed, 0));
  const SimDesign design = random_dgp(config.dgp, design_rng);

  DgpRow row;
  row.dgp = dgp;
  double excess = 0, density = 0, dependency = 0, unconditional = 0, conditional = 0;
  for (std::size_t rep = 0; rep < config.reps_per_dgp; ++rep) {
    const std::uint64_t rep_seed = derive_seed(dgp_seed, rep + 1);
    Rng rng(rep_seed);
    try {
      const Dataset train = generate(design, config.n_train, rng).data;
      const Dataset valid = generate(design, config.n_valid, rng).data;

      GridSpec grid = config.grid;
      grid.scoring = MetricKind::hamming;
      grid.seed = derive_seed(rep_seed, 1);
      FitConfig fit = config.fit;
      fit.seed = derive_seed(rep_seed, 2);

      double hamming_of[2];
      const EstimatorKind kinds[2] = {EstimatorKind::br, EstimatorKind::ccn};
      for (int e = 0; e < 2; ++e) {
        const GridSearchResult tuned = grid_search(train, kinds[e], grid, fit);
        FitConfig final_fit = fit;
        final_fit.loss_spec.q = tuned.best_q;
        final_fit.loss_spec.lambda = tuned.best_lambda;
        const FittedModel model = fit_estimator(kinds[e], train, final_fit);
        hamming_of[e] = hamming(valid.Y, model.predict(valid.X));
      }

      CdepConfig cdep = config.cdep;
      cdep.metric = MetricKind::hamming;
      cdep.seed = derive_seed(rep_seed, 3);
      const double cd = conditional_dependency(train, cdep).score;
      const auto dep = label_dependency(train.Y);

      excess += hamming_of[0] - hamming_of[1];
      density += label_density(train.Y);
      unconditional += unconditional_dependency(train.Y);
      conditional += cd;
      if (dep) {
        dependency += *dep;
        ++row.label_dependency_reps;
      }
      ++row.reps_used;
    } catch (const NumericalError&) {
      ++row.reps_failed;
    }
  }
  row.excess_hamming = mean_or_nan(excess, row.reps_used);
  row.label_density = mean_or_nan(density, row.reps_used);
  row.unconditional_dependency = mean_or_nan(unconditional, row.reps_used);
  row.conditional_dependency = mean_or_nan(conditional, row.reps_used);
  row.label_dependency = mean_or_nan(dependency, row.label_dependency_reps);
  return row;
}

ValidationResult summarize_validation(std::vector<DgpRow> rows) {
  ValidationResult r;
  r.rows = std::move(rows);
  r.rho_density = spearman_finite(r.rows, &DgpRow::label_density);
  r.rho_dependency = spearman_finite(r.rows, &DgpRow::label_dependency);
  r.rho_unconditional = spearman_finite(r.rows, &DgpRow::unconditional_dependency);
  r.rho_conditional = spearman_finite(r.rows, &DgpRow::conditional_dependency);
  return r;
}

ValidationResult measure_validation_experiment(const ValidationConfig& config) {
  if (config.n_dgps == 0 || config.reps_per_dgp == 0) throw ValidationError("budgets must be at least 1");
  std::vector<DgpRow> rows(config.n_dgps);
  parallel_for(config.n_dgps, config.jobs, [&](std::size_t d) { rows[d] = validation_row(config, d); });
  return summarize_validation(std::move(rows));
}

}  // namespace ccn
