#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "ccnkit/dataset.hpp"
#include "ccnkit/metrics.hpp"
#include "ccnkit/optimizer.hpp"
#include "ccnkit/rng.hpp"
#include "ccnkit/simgen.hpp"
#include "ccnkit/tuning.hpp"

namespace ccn {

/// Mean of all label cells.
double label_density(const Matrix& y);

/// Co-occurrence-weighted mean of |phi| over label pairs. Pairs with a
/// constant column are skipped; empty when nothing remains or the total
/// weight is zero.
std::optional<double> label_dependency(const Matrix& y);

/// Pearson chi-square statistic (no continuity correction) of the 2x2 table
/// of two binary columns; 0 when a margin is empty.
double chi2_statistic(const Matrix& y, std::size_t a, std::size_t b);

/// Share of label pairs whose chi-square independence test has p <= alpha.
double unconditional_dependency(const Matrix& y, double alpha = 0.01);

struct CdepConfig {
  MetricKind metric = MetricKind::hamming;
  std::size_t outer_folds = 10;
  std::size_t inner_folds = 5;
  Vector lambda_grid{0.0001, 0.001, 0.01, 0.05, 0.1, 0.25};
  std::uint64_t seed = 0;
  OptimizerConfig optimizer;

  void validate() const;
};

struct CdepResult {
  /// Positive when the other labels improve out-of-fold performance.
  double score = 0.0;
  /// Performance with the other labels minus performance without.
  double raw_difference = 0.0;
  double performance_without = 0.0;
  double performance_with = 0.0;
  /// Per-label models that fell back to an intercept-only prediction.
  std::size_t fallbacks = 0;
};

/// Out-of-fold comparison of per-label penalized logistic regressions on X
/// against the same on [X, true other labels], with lambda chosen per outer
/// fold by inner cross-validation.
CdepResult conditional_dependency(const Dataset& data, const CdepConfig& config);

struct DependencyReport {
  double label_density = 0.0;
  std::optional<double> label_dependency;
  std::optional<double> unconditional_dependency;  ///< empty when L < 2
  std::optional<CdepResult> conditional_dependency;  ///< empty when L < 2
  CdepConfig config;
};

DependencyReport dependency_report(const Dataset& data, const CdepConfig& config);

struct ValidationConfig {
  std::size_t n_dgps = 20;
  std::size_t reps_per_dgp = 5;
  std::size_t n_train = 200;
  std::size_t n_valid = 1000;
  std::uint64_t seed = 0;
  RandomDgpSpec dgp;
  /// Hyperparameter search for the BR and CCN fits (scored by Hamming loss).
  GridSpec grid;
  FitConfig fit;
  CdepConfig cdep;
  /// Worker threads over DGPs; results do not depend on it.
  std::size_t jobs = 1;
};

struct DgpRow {
  std::size_t dgp = 0;
  std::size_t reps_used = 0;
  std::size_t reps_failed = 0;
  double excess_hamming = 0.0;  ///< BR minus CCN validation Hamming loss
  double label_density = 0.0;
  double label_dependency = 0.0;  ///< mean over reps where it is defined
  std::size_t label_dependency_reps = 0;
  double unconditional_dependency = 0.0;
  double conditional_dependency = 0.0;
};

struct ValidationResult {
  std::vector<DgpRow> rows;
  /// Spearman correlation of each measure with excess_hamming, in the order
  /// density, dependency, unconditional, conditional. Empty when not computable.
  std::optional<SpearmanResult> rho_density, rho_dependency, rho_unconditional, rho_conditional;
};

/// One row of the validation experiment; repetitions use seeds derived from
/// (seed, dgp) so rows are independent of scheduling.
DgpRow validation_row(const ValidationConfig& config, std::size_t dgp);
ValidationResult summarize_validation(std::vector<DgpRow> rows);
ValidationResult measure_validation_experiment(const ValidationConfig& config);

}  // namespace ccn
