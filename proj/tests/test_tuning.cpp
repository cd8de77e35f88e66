#include <algorithm>
#include <set>

#include "ccnkit/simgen.hpp"
#include "ccnkit/tuning.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace ccn;

namespace {

std::vector<std::size_t> sizes(const std::vector<std::vector<std::size_t>>& folds) {
  std::vector<std::size_t> s;
  for (const auto& f : folds) s.push_back(f.size());
  return s;
}

Dataset strong_data(std::uint64_t seed, std::size_t n = 120) {
  Rng rng(seed);
  return generate(builtin_design("strong"), n, rng).data;
}

}  // namespace

TEST_CASE("kfold_split partitions the rows") {
  Rng rng(1);
  CHECK(sizes(kfold_split(10, 5, rng)) == std::vector<std::size_t>{2, 2, 2, 2, 2});
  CHECK(sizes(kfold_split(7, 3, rng)) == std::vector<std::size_t>{3, 2, 2});
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + rng.below(100), k = 2 + rng.below(std::min<std::size_t>(n - 1, 10));
    const auto folds = kfold_split(n, k, rng);
    std::set<std::size_t> seen;
    std::size_t total = 0;
    for (const auto& f : folds) {
      total += f.size();
      seen.insert(f.begin(), f.end());
    }
    CHECK(total == n);
    CHECK(seen.size() == n);
    CHECK(*seen.rbegin() == n - 1);
    const auto s = sizes(folds);
    CHECK(*std::max_element(s.begin(), s.end()) - *std::min_element(s.begin(), s.end()) <= 1);
  }
  Rng a(9), b(9);
  CHECK(kfold_split(30, 4, a) == kfold_split(30, 4, b));
  CHECK_THROWS_AS(kfold_split(3, 4, rng), ValidationError);
}

TEST_CASE("single grid point is returned with its score") {
  const Dataset d = strong_data(2);
  GridSpec grid;
  grid.q_values = {1.5};
  grid.lambda_values = {0.01};
  FitConfig cfg;
  cfg.n_random_starts = 1;
  const auto r = grid_search(d, EstimatorKind::ccn, grid, cfg);
  REQUIRE(r.table.points.size() == 1);
  CHECK(r.best_q == 1.5);
  CHECK(r.best_lambda == 0.01);
  CHECK(r.best_score == r.table.points[0].mean(MetricKind::hamming));
}

TEST_CASE("duplicate grid points score identically") {
  const Dataset d = strong_data(3);
  GridSpec grid;
  grid.q_values = {1.0, 1.0};
  grid.lambda_values = {0.01, 0.01};
  FitConfig cfg;
  cfg.n_random_starts = 1;
  const auto r = grid_search(d, EstimatorKind::ccn, grid, cfg);
  REQUIRE(r.table.points.size() == 4);
  for (const auto& p : r.table.points) CHECK(p.mean_scores == r.table.points[0].mean_scores);
  CHECK(select_best(r.table, MetricKind::hamming) == 0);
}

TEST_CASE("ties prefer larger lambda then smaller q") {
  CvTable t;
  auto point = [](double q, double lambda, double h) {
    GridPoint p{q, lambda, false, {}};
    p.mean_scores[static_cast<std::size_t>(MetricKind::hamming)] = h;
    p.mean_scores[static_cast<std::size_t>(MetricKind::micro_f1)] = 1.0 - h;
    return p;
  };
  t.points = {point(1.0, 0.01, 0.2), point(2.0, 0.1, 0.2), point(1.5, 0.1, 0.2), point(1.0, 0.001, 0.3)};
  CHECK(select_best(t, MetricKind::hamming) == 2);
  CHECK(select_best(t, MetricKind::micro_f1) == 2);
  t.points[3].mean_scores[static_cast<std::size_t>(MetricKind::hamming)] = 0.1;
  CHECK(select_best(t, MetricKind::hamming) == 3);
  t.points[3].failed = true;
  CHECK(select_best(t, MetricKind::hamming) == 2);
  for (auto& p : t.points) p.failed = true;
  CHECK_THROWS_AS(select_best(t, MetricKind::hamming), NumericalError);
}

TEST_CASE("grid search is deterministic and superset-dominant") {
  const Dataset d = strong_data(4);
  GridSpec small;
  small.q_values = {1.0, 2.0};
  small.lambda_values = {0.001, 0.1};
  small.scoring = MetricKind::nll;
  small.seed = 11;
  FitConfig cfg;
  cfg.n_random_starts = 1;
  const auto a = grid_search(d, EstimatorKind::ccn, small, cfg);
  const auto b = grid_search(d, EstimatorKind::ccn, small, cfg);
  CHECK(a.best_q == b.best_q);
  CHECK(a.best_lambda == b.best_lambda);
  CHECK(a.best_score == b.best_score);

  GridSpec big = small;
  big.q_values.push_back(3.0);
  big.lambda_values.push_back(0.01);
  const auto c = grid_search(d, EstimatorKind::ccn, big, cfg);
  CHECK(c.best_score <= a.best_score);
}

TEST_CASE("baselines search lambda only") {
  const Dataset d = strong_data(5);
  GridSpec grid;
  FitConfig cfg;
  for (EstimatorKind k : {EstimatorKind::br, EstimatorKind::cc_binary, EstimatorKind::cc_probability}) {
    const auto r = grid_search(d, k, grid, cfg);
    CHECK(r.table.points.size() == grid.lambda_values.size());
    CHECK(r.best_q == 1.0);
  }
  CHECK(parse_estimator("cc") == EstimatorKind::cc_binary);
  CHECK(parse_estimator("cc-prob") == EstimatorKind::cc_probability);
  CHECK_THROWS_AS(parse_estimator("rakel"), ValidationError);
}

TEST_CASE("grid validation") {
  const Dataset d = strong_data(6, 20);
  GridSpec grid;
  grid.k_folds = 1;
  CHECK_THROWS_AS(grid_search(d, EstimatorKind::br, grid, {}), ValidationError);
  grid.k_folds = 5;
  grid.lambda_values.clear();
  CHECK_THROWS_AS(grid_search(d, EstimatorKind::br, grid, {}), ValidationError);
  grid.lambda_values = {-1.0};
  CHECK_THROWS_AS(grid_search(d, EstimatorKind::br, grid, {}), ValidationError);
}
