#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "ccnkit/cli.hpp"
#include "ccnkit/io.hpp"
#include "ccnkit/log.hpp"
#include "ccnkit/persist.hpp"
#include "ccnkit/preprocess.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace ccn;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = fs::temp_directory_path() / ("ccnkit_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string operator/(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

int ccn_run(std::vector<std::string> args) {
  log::set_threshold(log::Level::error);
  return run_cli(args);
}

std::string slurp(const std::string& path) { return read_text(path); }

void write_file(const std::string& path, const std::string& text) { write_text(path, text); }

}  // namespace

TEST_CASE("csv round trip is exact") {
  Rng rng(1);
  Matrix m = testing::random_matrix(rng, 20, 4, -1e6, 1e6);
  m(0, 0) = 1e-300;
  m(1, 1) = -0.1;
  m(2, 2) = 1.0 / 3.0;
  std::stringstream s;
  write_csv(s, m, "x");
  const CsvTable t = read_csv(s);
  CHECK(t.header == std::vector<std::string>{"x1", "x2", "x3", "x4"});
  CHECK(t.values == m);
  CHECK(format_double(0.1) == "0.10000000000000001");

  std::stringstream bad("a,b\n1,2\n3\n");
  try {
    read_csv(bad, "in.csv");
    FAIL("expected a parse error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("in.csv:3") != std::string::npos);
  }
  std::stringstream empty("");
  CHECK_THROWS_AS(read_csv(empty), ValidationError);
}

TEST_CASE("simulate") {
  TempDir d;
  REQUIRE(ccn_run({"simulate", "--design", "strong", "--n", "200", "--seed", "7", "--out-x", d / "x.csv", "--out-y",
                   d / "y.csv"}) == 0);
  const std::string x1 = slurp(d / "x.csv"), y1 = slurp(d / "y.csv");
  REQUIRE(ccn_run({"simulate", "--design", "strong", "--n", "200", "--seed", "7", "--out-x", d / "x.csv", "--out-y",
                   d / "y.csv"}) == 0);
  CHECK(slurp(d / "x.csv") == x1);
  CHECK(slurp(d / "y.csv") == y1);
  CHECK(read_matrix(d / "x.csv").rows() == 200);
  const json manifest = json::parse(slurp(d / "y.manifest.json"));
  CHECK(manifest["artifacts"].size() == 2);
  CHECK(manifest["command"] == "simulate");

  REQUIRE(ccn_run({"simulate", "--design", "increased", "--seed", "1", "--out-x", d / "xi.csv", "--out-y",
                   d / "yi.csv", "--out-design", d / "inc.json"}) == 0);
  CHECK(read_matrix(d / "yi.csv").cols() == 9);

  // Re-reading the exported design reproduces the draws.
  REQUIRE(ccn_run({"simulate", "--design-file", d / "inc.json", "--seed", "1", "--out-x", d / "xj.csv", "--out-y",
                   d / "yj.csv"}) == 0);
  CHECK(slurp(d / "yj.csv") == slurp(d / "yi.csv"));

  REQUIRE(ccn_run({"simulate", "--design", "weak", "--n", "0", "--out-x", d / "x0.csv", "--out-y", d / "y0.csv"}) ==
          0);
  CHECK(slurp(d / "x0.csv") == "x1,x2,x3\n");
  CHECK(slurp(d / "y0.csv") == "y1,y2,y3\n");

  CHECK(ccn_run({"simulate", "--design", "nope", "--out-x", d / "a", "--out-y", d / "b"}) == 1);
  CHECK(ccn_run({"simulate", "--out-x", d / "a", "--out-y", d / "b"}) == 1);
  CHECK(ccn_run({"bogus"}) == 1);
  CHECK(ccn_run({"--help"}) == 0);
}

TEST_CASE("numerical failures exit with 2") {
  TempDir d;
  json design = design_to_json(builtin_design("strong"));
  design["sigma"]["data"] = {1.0, 2.0, 0.0, 2.0, 1.0, 0.0, 0.0, 0.0, 1.0};  // indefinite
  write_file(d / "bad.json", design.dump());
  CHECK(ccn_run({"simulate", "--design-file", d / "bad.json", "--out-x", d / "x.csv", "--out-y", d / "y.csv"}) == 2);
  CHECK_FALSE(fs::exists(d / "y.manifest.json"));
}

TEST_CASE("fit, predict and the frozen-C equivalence") {
  TempDir d;
  REQUIRE(ccn_run({"simulate", "--design", "strong", "--seed", "3", "--out-x", d / "x.csv", "--out-y", d / "y.csv"}) ==
          0);
  REQUIRE(ccn_run({"fit", "--x", d / "x.csv", "--y", d / "y.csv", "--method", "br", "--out-model", d / "br.json"}) ==
          0);
  REQUIRE(ccn_run({"fit", "--x", d / "x.csv", "--y", d / "y.csv", "--method", "ccn", "--freeze-c", "--out-model",
                   d / "fz.json"}) == 0);
  REQUIRE(ccn_run({"predict", "--model", d / "br.json", "--x", d / "x.csv", "--proba", "--out", d / "a.csv"}) == 0);
  REQUIRE(ccn_run({"predict", "--model", d / "fz.json", "--x", d / "x.csv", "--proba", "--out", d / "b.csv"}) == 0);
  // Same objective, reached by one joint fit versus per-label fits.
  CHECK(max_abs(read_matrix(d / "a.csv") - read_matrix(d / "b.csv")) < 2e-3);
  CHECK(load_model(d / "br.json").training_loss ==
        doctest::Approx(load_model(d / "fz.json").training_loss).epsilon(1e-6));

  const json manifest = json::parse(slurp(d / "fz.manifest.json"));
  CHECK(manifest["results"].contains("training_loss"));
  CHECK(manifest["config"]["method"] == "ccn");

  CHECK(ccn_run({"fit", "--x", d / "x.csv", "--y", d / "y.csv", "--method", "br", "--freeze-c", "--out-model",
                 d / "no.json"}) == 1);
  CHECK(ccn_run({"fit", "--x", d / "x.csv", "--y", d / "x.csv", "--out-model", d / "no.json"}) == 1);
}

TEST_CASE("saved models predict exactly like in-memory ones") {
  TempDir d;
  Rng rng(4);
  const Dataset data = generate(builtin_design("six-label"), 150, rng).data;
  write_csv(d / "x.csv", data.X, "x");
  write_csv(d / "y.csv", data.Y, "y");
  FitConfig cfg;
  cfg.n_random_starts = 2;
  cfg.label_order = LabelOrder::reversed();
  const FittedModel model = fit_ccn(data, cfg);
  save_model(d / "m.json", model);
  const FittedModel loaded = load_model(d / "m.json");
  CHECK(loaded.params == model.params);
  CHECK(loaded.label_order == model.label_order);
  CHECK(loaded.loss_spec.lambda == model.loss_spec.lambda);
  REQUIRE(ccn_run({"predict", "--model", d / "m.json", "--x", d / "x.csv", "--proba", "--out", d / "p.csv"}) == 0);
  CHECK(read_matrix(d / "p.csv") == model.predict_proba(data.X));

  json doc = json::parse(slurp(d / "m.json"));
  doc["schema_version"] = 99;
  write_file(d / "v99.json", doc.dump());
  CHECK_THROWS_AS(load_model(d / "v99.json"), ValidationError);
  CHECK(ccn_run({"predict", "--model", d / "v99.json", "--x", d / "x.csv", "--out", d / "q.csv"}) == 1);

  Matrix narrow(3, 2, 0.0);
  write_csv(d / "narrow.csv", narrow, "x");
  CHECK(ccn_run({"predict", "--model", d / "m.json", "--x", d / "narrow.csv", "--out", d / "q.csv"}) == 1);
}

TEST_CASE("label order options") {
  TempDir d;
  REQUIRE(ccn_run({"simulate", "--design", "six-label", "--seed", "5", "--out-x", d / "x.csv", "--out-y",
                   d / "y.csv"}) == 0);
  REQUIRE(ccn_run({"fit", "--x", d / "x.csv", "--y", d / "y.csv", "--order", "reversed", "--starts", "1",
                   "--out-model", d / "rev.json"}) == 0);
  CHECK(load_model(d / "rev.json").label_order == Permutation{5, 4, 3, 2, 1, 0});

  write_file(d / "order.txt", "2, 1, 3\n6 5 4\n");
  REQUIRE(ccn_run({"fit", "--x", d / "x.csv", "--y", d / "y.csv", "--order", d / "order.txt", "--starts", "1",
                   "--out-model", d / "file.json"}) == 0);
  CHECK(load_model(d / "file.json").label_order == Permutation{1, 0, 2, 5, 4, 3});
  write_file(d / "short.txt", "1 2\n");
  CHECK(ccn_run({"fit", "--x", d / "x.csv", "--y", d / "y.csv", "--order", d / "short.txt", "--out-model",
                 d / "no.json"}) == 1);

  // Binary relevance does not depend on the order, so a reversed-order fit
  // must report columns in the original label indexing.
  REQUIRE(ccn_run({"fit", "--x", d / "x.csv", "--y", d / "y.csv", "--method", "br", "--out-model", d / "b0.json"}) ==
          0);
  REQUIRE(ccn_run({"fit", "--x", d / "x.csv", "--y", d / "y.csv", "--method", "br", "--order", "reversed",
                   "--out-model", d / "b1.json"}) == 0);
  REQUIRE(ccn_run({"predict", "--model", d / "b0.json", "--x", d / "x.csv", "--proba", "--out", d / "p0.csv"}) == 0);
  REQUIRE(ccn_run({"predict", "--model", d / "b1.json", "--x", d / "x.csv", "--proba", "--out", d / "p1.csv"}) == 0);
  const Matrix p0 = read_matrix(d / "p0.csv"), p1 = read_matrix(d / "p1.csv");
  CHECK(max_abs(p0 - p1) < 1e-12);
}

TEST_CASE("zero model predicts one half") {
  TempDir d;
  FittedModel m;
  m.params = ModelParams::zeros(2, 3);
  m.label_order = {0, 1};
  save_model(d / "zero.json", m);
  write_csv(d / "x.csv", Matrix(4, 3, 1.5), "x");
  REQUIRE(ccn_run({"predict", "--model", d / "zero.json", "--x", d / "x.csv", "--proba", "--out", d / "p.csv"}) ==
          0);
  CHECK(read_matrix(d / "p.csv") == Matrix(4, 2, 0.5));
}

TEST_CASE("evaluate") {
  TempDir d;
  write_csv(d / "y.csv", Matrix::from_rows({{1, 0}, {0, 1}}), "y");
  write_csv(d / "yhat.csv", Matrix::from_rows({{1, 1}, {0, 1}}), "y");
  write_csv(d / "half.csv", Matrix(2, 2, 0.5), "y");

  REQUIRE(ccn_run({"evaluate", "--y-true", d / "y.csv", "--y-pred", d / "y.csv", "--out", d / "perfect.csv"}) == 0);
  CHECK(slurp(d / "perfect.csv") ==
        "metric,value,direction\nhamming,0,lower\nzero-one,0,lower\nmicro-f1,1,higher\nmacro-f1,1,higher\n");

  REQUIRE(ccn_run({"evaluate", "--y-true", d / "y.csv", "--y-pred", d / "yhat.csv", "--metrics",
                   "hamming,zero-one,micro-f1", "--out", d / "mixed.csv"}) == 0);
  CHECK(slurp(d / "mixed.csv") ==
        "metric,value,direction\nhamming,0.25,lower\nzero-one,0.5,lower\nmicro-f1,0.80000000000000004,higher\n");

  REQUIRE(ccn_run({"evaluate", "--y-true", d / "y.csv", "--proba", d / "half.csv", "--metrics", "nll", "--out",
                   d / "nll.csv"}) == 0);
  const json m = json::parse(slurp(d / "nll.manifest.json"));
  CHECK(m["results"]["nll"].get<double>() == doctest::Approx(std::log(2.0)).epsilon(1e-15));

  CHECK(ccn_run({"evaluate", "--y-true", d / "y.csv", "--y-pred", d / "yhat.csv", "--metrics", "nll"}) == 1);
  CHECK(ccn_run({"evaluate", "--y-true", d / "y.csv"}) == 1);
}

TEST_CASE("cdep command") {
  TempDir d;
  REQUIRE(ccn_run({"simulate", "--design", "strong", "--seed", "9", "--n", "120", "--out-x", d / "x.csv", "--out-y",
                   d / "y.csv"}) == 0);
  REQUIRE(ccn_run({"cdep", "--x", d / "x.csv", "--y", d / "y.csv", "--outer-folds", "4", "--inner-folds", "3",
                   "--lambda-grid", "0.01,0.1", "--seed", "2", "--out", d / "r.json"}) == 0);
  const json r = json::parse(slurp(d / "r.json"));
  CHECK(std::isfinite(r["conditional_dependency"].get<double>()));
  CHECK(r["cv_config"]["outer_folds"] == 4);
  CHECK(r["metric_used"] == "hamming");

  write_csv(d / "y1.csv", select_cols(read_matrix(d / "y.csv"), std::vector<std::size_t>{0}), "y");
  REQUIRE(ccn_run({"cdep", "--x", d / "x.csv", "--y", d / "y1.csv", "--out", d / "r1.json"}) == 0);
  const json r1 = json::parse(slurp(d / "r1.json"));
  CHECK(r1["conditional_dependency"].is_null());
  CHECK(r1["unconditional_dependency"].is_null());
  CHECK(r1["label_density"].is_number());
}

TEST_CASE("preprocess") {
  TempDir d;
  Rng rng(10);
  // Strongly anisotropic 2-D sample: one dominant direction.
  Matrix x(500, 2);
  for (std::size_t i = 0; i < 500; ++i) {
    const double t = 10.0 * rng.normal();
    x(i, 0) = t + 0.1 * rng.normal();
    x(i, 1) = 0.5 * t + 0.1 * rng.normal();
  }
  const FeatureTransform t = fit_transform(x, false, 0.9);
  CHECK(t.n_outputs() == 1);
  CHECK(t.eigenvalues[0] / (t.eigenvalues[0] + t.eigenvalues[1]) >= 0.9);

  // Near-identity covariance: needs most of the components.
  const Matrix iso = testing::random_matrix(rng, 2000, 5, -1.0, 1.0);
  const FeatureTransform ti = fit_transform(iso, true, 0.9);
  double total = 0.0, kept = 0.0;
  for (std::size_t j = 0; j < 5; ++j) {
    total += ti.eigenvalues[j];
    if (j < ti.n_outputs()) kept += ti.eigenvalues[j];
  }
  CHECK(kept / total >= 0.9);
  CHECK((kept - ti.eigenvalues[ti.n_outputs() - 1]) / total < 0.9);
  CHECK(ti.n_outputs() >= 4);

  write_csv(d / "x.csv", iso, "x");
  REQUIRE(ccn_run({"preprocess", "--x", d / "x.csv", "--standardize", "--pca-variance", "0.9", "--out", d / "z.csv",
                   "--out-transform", d / "t.json"}) == 0);
  REQUIRE(ccn_run({"preprocess", "--x", d / "x.csv", "--apply", d / "t.json", "--out", d / "z2.csv"}) == 0);
  CHECK(slurp(d / "z.csv") == slurp(d / "z2.csv"));
  CHECK(read_csv(fs::path(d / "z.csv")).header.front() == "pc1");

  // Standardized columns have mean 0 and n-1 sd 1.
  const Matrix s = fit_transform(iso, true, std::nullopt).apply(iso);
  for (std::size_t j = 0; j < 5; ++j) {
    double m = 0.0, ss = 0.0;
    for (std::size_t i = 0; i < s.rows(); ++i) m += s(i, j);
    m /= s.rows();
    for (std::size_t i = 0; i < s.rows(); ++i) ss += (s(i, j) - m) * (s(i, j) - m);
    CHECK(std::abs(m) < 1e-12);
    CHECK(std::sqrt(ss / (s.rows() - 1)) == doctest::Approx(1.0).epsilon(1e-12));
  }

  write_file(d / "c.csv", "a,b\n1,5\n2,5\n3,5\n");
  try {
    fit_transform(read_matrix(d / "c.csv"), true, std::nullopt, {"a", "b"});
    FAIL("expected an error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("'b'") != std::string::npos);
  }
  CHECK(ccn_run({"preprocess", "--x", d / "c.csv", "--standardize", "--out", d / "o.csv"}) == 1);
}

TEST_CASE("bench output does not depend on --jobs") {
  TempDir d;
  const std::vector<std::string> common{"--reps",   "3",      "--seed",      "5",    "--designs",     "strong,weak",
                                        "--methods", "ccn,br,cc", "--q-grid", "1,2", "--lambda-grid", "0.01,0.1",
                                        "--starts", "1",      "--folds",     "3",    "--n-valid",     "200"};
  auto with = [&](std::vector<std::string> head, const std::string& jobs, const std::string& dir) {
    head.insert(head.end(), common.begin(), common.end());
    head.insert(head.end(), {"--jobs", jobs, "--out-dir", dir});
    return head;
  };
  REQUIRE(ccn_run(with({"bench", "--suite", "table1"}, "1", d / "j1")) == 0);
  REQUIRE(ccn_run(with({"bench", "--suite", "table1"}, "3", d / "j3")) == 0);
  CHECK(slurp(d / "j1/table1_reps.csv") == slurp(d / "j3/table1_reps.csv"));
  CHECK(slurp(d / "j1/table1_summary.csv") == slurp(d / "j3/table1_summary.csv"));
  const json m = json::parse(slurp(d / "j1/manifest.json"));
  CHECK(m["artifacts"].size() == 2);

  std::istringstream lines(slurp(d / "j1/table1_reps.csv"));
  std::string line;
  std::size_t rows = 0;
  while (std::getline(lines, line)) ++rows;
  CHECK(rows == 1 + 2 * 3 * 3 * 5);

  // Filtering designs keeps each design's draws.
  REQUIRE(ccn_run({"bench", "--suite", "table1", "--reps", "3", "--seed", "5", "--designs", "weak", "--methods",
                   "ccn,br,cc", "--q-grid", "1,2", "--lambda-grid", "0.01,0.1", "--starts", "1", "--folds", "3",
                   "--n-valid", "200", "--out-dir", d / "weak"}) == 0);
  const std::string all = slurp(d / "j1/table1_reps.csv"), weak = slurp(d / "weak/table1_reps.csv");
  std::istringstream wl(weak);
  std::getline(wl, line);
  while (std::getline(wl, line)) CHECK(all.find(line + "\n") != std::string::npos);

  const std::vector<std::string> f6{"bench", "--suite", "figure6", "--reps", "3x1", "--seed", "2", "--q-grid", "1",
                                    "--lambda-grid", "0.01", "--starts", "1", "--folds", "3", "--n-train", "100",
                                    "--n-valid", "200"};
  auto f6_with = [&](const std::string& jobs, const std::string& dir) {
    auto a = f6;
    a.insert(a.end(), {"--jobs", jobs, "--out-dir", dir});
    return a;
  };
  REQUIRE(ccn_run(f6_with("1", d / "f1")) == 0);
  REQUIRE(ccn_run(f6_with("2", d / "f2")) == 0);
  CHECK(slurp(d / "f1/figure6_dgps.csv") == slurp(d / "f2/figure6_dgps.csv"));
  CHECK(slurp(d / "f1/figure6_summary.csv") == slurp(d / "f2/figure6_summary.csv"));

  CHECK(ccn_run({"bench", "--suite", "table1", "--reps", "2x2", "--out-dir", d / "bad"}) == 1);
  CHECK(ccn_run({"bench", "--suite", "table1", "--designs", "nope", "--out-dir", d / "bad"}) == 1);
}
