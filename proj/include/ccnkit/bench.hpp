#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ccnkit/dependency.hpp"
#include "ccnkit/metrics.hpp"
#include "ccnkit/tuning.hpp"

namespace ccn {

struct Table1Config {
  std::vector<std::string> designs{"strong", "weak", "reversed", "sequential", "increased"};
  std::vector<EstimatorKind> methods{EstimatorKind::ccn, EstimatorKind::br, EstimatorKind::cc_binary};
  std::size_t reps = 50;
  std::size_t n_train = 200;
  std::size_t n_valid = 1000;
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
  /// q/lambda grid and fold count; scoring is set per metric.
  GridSpec grid;
  FitConfig fit;

  void validate() const;
};

/// One (design, repetition, method, metric) validation score.
struct Table1Record {
  std::string design;
  std::size_t rep = 0;
  EstimatorKind method = EstimatorKind::ccn;
  MetricKind metric = MetricKind::hamming;
  bool ok = false;
  double value = 0.0;
  double q = 0.0;
  double lambda = 0.0;
};

struct Table1Summary {
  std::string design;
  EstimatorKind method = EstimatorKind::ccn;
  MetricKind metric = MetricKind::hamming;
  std::size_t n_ok = 0;
  std::size_t n_failed = 0;
  double mean = 0.0;
  double sd = 0.0;
  /// Paired against CCN over repetitions where both succeeded; empty for CCN
  /// itself or with too few nonzero differences.
  std::size_t n_paired = 0;
  std::size_t ccn_better = 0;
  std::optional<double> wilcoxon_p;
};

struct Table1Result {
  std::vector<Table1Record> records;  ///< design, rep, method, metric order
  std::vector<Table1Summary> summary;
};

/// Repetition r of design d draws train and validation sets from
/// derive_seed(derive_seed(seed, d), r), with d the design's index in
/// builtin_design_names(), so filtering designs never changes results.
/// Every method is tuned once per repetition by cross-validation; each metric
/// then selects its own grid point and the refit is scored on the validation set.
Table1Result run_table1(const Table1Config& config);
std::vector<Table1Summary> summarize_table1(const std::vector<Table1Record>& records);

void write_table1_records(std::ostream& out, const std::vector<Table1Record>& records);
void write_table1_summary(std::ostream& out, const std::vector<Table1Summary>& summary);

void write_figure6_rows(std::ostream& out, const ValidationResult& result);
void write_figure6_summary(std::ostream& out, const ValidationResult& result);

}  // namespace ccn
