#include "ccnkit/cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstring>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "ccnkit/bench.hpp"
#include "ccnkit/dependency.hpp"
#include "ccnkit/io.hpp"
#include "ccnkit/log.hpp"
#include "ccnkit/persist.hpp"
#include "ccnkit/preprocess.hpp"
#include "ccnkit/simgen.hpp"
#include "ccnkit/tuning.hpp"
#include "ccnkit/version.hpp"

namespace ccn {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Collects what a command did and writes it after every other artifact, so
// a manifest's presence marks a completed run.
class Manifest {
 public:
  Manifest(std::string command, const CLI::App& sub, std::uint64_t seed)
      : command_(std::move(command)), seed_(seed), start_(std::chrono::steady_clock::now()) {
    for (const CLI::Option* o : sub.get_options()) {
      const std::string name = o->get_single_name();
      if (name.empty() || name == "help") continue;
      if (o->count() == 0) {
        config_[name] = o->get_default_str();
      } else if (o->get_items_expected_max() > 1 || o->results().size() > 1) {
        config_[name] = o->results();
      } else {
        config_[name] = o->results().empty() ? std::string() : o->results().front();
      }
    }
  }

  void artifact(const fs::path& p) { artifacts_.push_back(p.string()); }
  json& results() { return results_; }

  void write(const fs::path& path) const {
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    json doc{{"command", command_},
             {"library_version", kVersion},
             {"seed", seed_},
             {"config", config_},
             {"artifacts", artifacts_},
             {"results", results_},
             {"wall_clock_seconds", secs}};
    write_text(path, doc.dump(2) + "\n");
  }

 private:
  std::string command_;
  std::uint64_t seed_;
  std::chrono::steady_clock::time_point start_;
  json config_ = json::object();
  std::vector<std::string> artifacts_;
  json results_ = json::object();
};

fs::path sibling_manifest(fs::path primary) { return primary.replace_extension(".manifest.json"); }

Dataset load_dataset(const std::string& x_path, const std::string& y_path) {
  Dataset d{read_matrix(x_path), read_matrix(y_path)};
  if (d.X.rows() != d.Y.rows()) {
    throw ValidationError("'" + x_path + "' has " + std::to_string(d.X.rows()) + " rows but '" + y_path +
                          "' has " + std::to_string(d.Y.rows()));
  }
  d.validate();
  return d;
}

Permutation read_order_file(const std::string& path) {
  std::string text = read_text(path);
  std::replace(text.begin(), text.end(), ',', ' ');
  std::istringstream in(text);
  Permutation p;
  std::string tok;
  while (in >> tok) {
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size() || v == 0)
      throw ValidationError("order file '" + path + "': '" + tok + "' is not a 1-based label index");
    p.push_back(v - 1);
  }
  return p;
}

LabelOrder parse_order(const std::string& s) {
  if (s == "given") return LabelOrder::given();
  if (s == "entropy") return LabelOrder::entropy();
  if (s == "reversed") return LabelOrder::reversed();
  return LabelOrder::explicit_order(read_order_file(s));
}

std::vector<MetricKind> parse_metric_list(const std::vector<std::string>& names) {
  std::vector<MetricKind> out;
  for (const auto& n : names) out.push_back(parse_metric(n));
  return out;
}

json grid_point_json(const GridPoint& p) {
  json scores = json::object();
  for (MetricKind k : kAllMetrics) scores[std::string(to_string(k))] = p.mean(k);
  return {{"q", p.q}, {"lambda", p.lambda}, {"failed", p.failed}, {"mean_scores", scores}};
}

// ---------------------------------------------------------------- simulate

struct SimulateOptions {
  std::string design, design_file;
  bool random_dgp = false;
  std::optional<std::size_t> n;
  std::uint64_t seed = 0;
  std::string out_x, out_y, out_design, out_latent;
};

void cmd_simulate(const SimulateOptions& o, const CLI::App& sub) {
  if (!o.design.empty() + !o.design_file.empty() + o.random_dgp != 1)
    throw ValidationError("simulate: give exactly one of --design, --design-file or --random-dgp");
  Manifest manifest("simulate", sub, o.seed);
  Rng rng(o.seed);
  const SimDesign design = o.random_dgp            ? random_dgp(RandomDgpSpec{}, rng)
                           : o.design_file.empty() ? builtin_design(o.design)
                                                   : design_from_json(json::parse(read_text(o.design_file)));
  const Simulation sim = generate(design, o.n.value_or(design.n), rng);
  write_csv(o.out_x, sim.data.X, "x");
  manifest.artifact(o.out_x);
  write_csv(o.out_y, sim.data.Y, "y");
  manifest.artifact(o.out_y);
  if (!o.out_latent.empty()) {
    write_csv(o.out_latent, sim.latent_p, "p");
    manifest.artifact(o.out_latent);
  }
  if (!o.out_design.empty()) {
    write_text(o.out_design, design_to_json(design).dump(2) + "\n");
    manifest.artifact(o.out_design);
  }
  manifest.results() = {{"design", design.name}, {"n", sim.data.n()}, {"labels", sim.data.L()}};
  manifest.write(sibling_manifest(o.out_y));
}

// --------------------------------------------------------------------- fit

struct FitOptions {
  std::string x, y, out_model;
  std::string method = "ccn";
  std::string loss = "bce";
  double xi_plus = 0.0, xi_minus = 0.0, kappa = 0.0;
  double q = 1.0, lambda = 0.01;
  bool tune = false;
  std::string scoring = "hamming";
  std::vector<double> q_grid, lambda_grid;
  std::size_t folds = 5;
  std::string order = "given";
  std::uint64_t seed = 0;
  std::size_t starts = 10;
  bool no_informed = false;
  bool freeze_c = false;
  std::string chain_inputs = "truth";
};

void cmd_fit(const FitOptions& o, const CLI::App& sub) {
  Manifest manifest("fit", sub, o.seed);
  const Dataset data = load_dataset(o.x, o.y);
  const EstimatorKind kind = parse_estimator(o.method);

  FitConfig cfg;
  cfg.loss_spec.kind = parse_loss_kind(o.loss);
  cfg.loss_spec.xi_plus = o.xi_plus;
  cfg.loss_spec.xi_minus = o.xi_minus;
  cfg.loss_spec.kappa = o.kappa;
  cfg.loss_spec.q = o.q;
  cfg.loss_spec.lambda = o.lambda;
  cfg.activation = cfg.loss_spec.natural_activation();
  cfg.n_random_starts = o.starts;
  cfg.use_informed_init = !o.no_informed;
  cfg.seed = o.seed;
  cfg.label_order = parse_order(o.order);
  if (o.freeze_c) {
    if (kind != EstimatorKind::ccn) throw ValidationError("--freeze-c applies to --method ccn only");
    cfg.dependencies = Dependencies::frozen;
  }
  if (o.chain_inputs == "predicted") cfg.chain_inputs = ChainInputs::predicted;

  if (o.tune) {
    GridSpec grid;
    if (!o.q_grid.empty()) grid.q_values = o.q_grid;
    if (!o.lambda_grid.empty()) grid.lambda_values = o.lambda_grid;
    grid.k_folds = o.folds;
    grid.scoring = parse_metric(o.scoring);
    grid.seed = derive_seed(o.seed, 1);
    const GridSearchResult tuned = grid_search(data, kind, grid, cfg);
    cfg.loss_spec.q = tuned.best_q;
    cfg.loss_spec.lambda = tuned.best_lambda;
    json table = json::array();
    for (const auto& p : tuned.table.points) table.push_back(grid_point_json(p));
    manifest.results()["cv_table"] = table;
    manifest.results()["cv_best_score"] = tuned.best_score;
    log::info("selected q=" + format_double(tuned.best_q) + " lambda=" + format_double(tuned.best_lambda));
  }

  const FittedModel model = fit_estimator(kind, data, cfg);
  if (model.degenerate_label_warning) log::error("a label is constant and lambda is 0; its bias diverges");
  save_model(o.out_model, model);
  manifest.artifact(o.out_model);
  manifest.results()["selected_q"] = cfg.loss_spec.q;
  manifest.results()["selected_lambda"] = cfg.loss_spec.lambda;
  manifest.results()["training_loss"] = model.training_loss;
  manifest.results()["label_order"] = model.label_order;
  manifest.results()["n_starts_used"] = model.n_starts_used;
  manifest.write(sibling_manifest(o.out_model));
}

// ----------------------------------------------------------------- predict

struct PredictOptions {
  std::string model, x, out;
  bool proba = false;
};

void cmd_predict(const PredictOptions& o, const CLI::App& sub) {
  Manifest manifest("predict", sub, 0);
  const FittedModel model = load_model(o.model);
  const Matrix x = read_matrix(o.x);
  const Matrix out = o.proba ? model.predict_proba(x) : model.predict(x);
  write_csv(o.out, out, "y");
  manifest.artifact(o.out);
  manifest.results() = {{"rows", out.rows()}, {"labels", out.cols()}};
  manifest.write(sibling_manifest(o.out));
}

// ---------------------------------------------------------------- evaluate

struct EvaluateOptions {
  std::string y_true, y_pred, proba, out;
  std::vector<std::string> metrics;
};

void cmd_evaluate(const EvaluateOptions& o, const CLI::App& sub) {
  if (o.y_pred.empty() && o.proba.empty()) throw ValidationError("evaluate: give --y-pred and/or --proba");
  const Matrix y = read_matrix(o.y_true);
  check_binary(y, "--y-true");
  std::optional<Matrix> hard, soft;
  if (!o.y_pred.empty()) {
    hard = read_matrix(o.y_pred);
    check_binary(*hard, "--y-pred");
  }
  if (!o.proba.empty()) soft = read_matrix(o.proba);
  if (!hard) hard = threshold(*soft, Activation::sigmoid);

  std::vector<MetricKind> metrics;
  if (o.metrics.empty()) {
    for (MetricKind k : kAllMetrics)
      if (k != MetricKind::nll || soft) metrics.push_back(k);
  } else {
    metrics = parse_metric_list(o.metrics);
  }

  std::ostringstream csv;
  csv << "metric,value,direction\n";
  json results = json::object();
  for (MetricKind k : metrics) {
    double v;
    if (k == MetricKind::nll) {
      if (!soft) throw ValidationError("evaluate: nll requires --proba");
      v = nll(y, *soft);
    } else {
      v = score(k, y, *hard);
    }
    csv << to_string(k) << ',' << format_double(v) << ',' << (lower_is_better(k) ? "lower" : "higher") << '\n';
    results[std::string(to_string(k))] = v;
  }
  if (o.out.empty() || o.out == "-") {
    std::cout << csv.str();
    return;
  }
  Manifest manifest("evaluate", sub, 0);
  write_text(o.out, csv.str());
  manifest.artifact(o.out);
  manifest.results() = results;
  manifest.write(sibling_manifest(o.out));
}

// -------------------------------------------------------------------- cdep

struct CdepOptions {
  std::string x, y, out;
  std::string metric = "hamming";
  std::size_t outer = 10, inner = 5;
  std::vector<double> lambda_grid;
  std::uint64_t seed = 0;
};

void cmd_cdep(const CdepOptions& o, const CLI::App& sub) {
  const Dataset data = load_dataset(o.x, o.y);
  CdepConfig cfg;
  cfg.metric = parse_metric(o.metric);
  cfg.outer_folds = o.outer;
  cfg.inner_folds = o.inner;
  if (!o.lambda_grid.empty()) cfg.lambda_grid = o.lambda_grid;
  cfg.seed = o.seed;
  const json report = report_to_json(dependency_report(data, cfg));
  if (o.out.empty() || o.out == "-") {
    std::cout << report.dump(2) << '\n';
    return;
  }
  Manifest manifest("cdep", sub, o.seed);
  write_text(o.out, report.dump(2) + "\n");
  manifest.artifact(o.out);
  manifest.write(sibling_manifest(o.out));
}

// ------------------------------------------------------------------- bench

struct BenchOptions {
  std::string suite = "table1";
  std::string reps;
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
  std::string out_dir;
  std::vector<std::string> designs, methods;
  std::size_t n_train = 200, n_valid = 1000;
  std::size_t starts = 10;
  std::size_t folds = 5;
  std::vector<double> q_grid, lambda_grid;
};

std::size_t parse_count(const std::string& s, const char* what) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || v == 0)
    throw ValidationError(std::string("--reps: bad ") + what + " '" + s + "'");
  return v;
}

// "D x R" for figure6 (also "DxR" and "D×R"); a bare number is a count.
std::pair<std::size_t, std::optional<std::size_t>> parse_reps(std::string s) {
  for (const char* sep : {"\xC3\x97", "x", "X"}) {
    const auto at = s.find(sep);
    if (at != std::string::npos)
      return {parse_count(s.substr(0, at), "count"), parse_count(s.substr(at + std::strlen(sep)), "count")};
  }
  return {parse_count(s, "count"), std::nullopt};
}

void write_csv_text(const fs::path& path, Manifest& manifest, const std::string& text) {
  write_text(path, text);
  manifest.artifact(path);
}

void cmd_bench(const BenchOptions& o, const CLI::App& sub) {
  Manifest manifest("bench", sub, o.seed);
  const fs::path dir(o.out_dir);
  GridSpec grid;
  if (!o.q_grid.empty()) grid.q_values = o.q_grid;
  if (!o.lambda_grid.empty()) grid.lambda_values = o.lambda_grid;
  grid.k_folds = o.folds;
  FitConfig fit;
  fit.n_random_starts = o.starts;

  if (o.suite == "table1") {
    Table1Config cfg;
    const auto [reps, extra] = parse_reps(o.reps.empty() ? "50" : o.reps);
    if (extra) throw ValidationError("--reps for table1 is a single repetition count");
    cfg.reps = reps;
    if (!o.designs.empty()) cfg.designs = o.designs;
    if (!o.methods.empty()) {
      cfg.methods.clear();
      for (const auto& m : o.methods) cfg.methods.push_back(parse_estimator(m));
    }
    cfg.n_train = o.n_train;
    cfg.n_valid = o.n_valid;
    cfg.seed = o.seed;
    cfg.jobs = o.jobs;
    cfg.grid = grid;
    cfg.fit = fit;
    const Table1Result r = run_table1(cfg);
    std::ostringstream reps_csv, summary_csv;
    write_table1_records(reps_csv, r.records);
    write_table1_summary(summary_csv, r.summary);
    write_csv_text(dir / "table1_reps.csv", manifest, reps_csv.str());
    write_csv_text(dir / "table1_summary.csv", manifest, summary_csv.str());
    std::size_t failed = 0;
    for (const auto& rec : r.records) failed += !rec.ok;
    json methods = json::array();
    for (auto m : cfg.methods) methods.push_back(to_string(m));
    manifest.results() = {{"designs", cfg.designs},
                          {"methods", methods},
                          {"methods_note", "in-repo methods only; third-party benchmark columns are not run"},
                          {"failed_scores", failed}};
  } else if (o.suite == "figure6") {
    ValidationConfig cfg;
    const auto [dgps, reps] = parse_reps(o.reps.empty() ? "20x5" : o.reps);
    cfg.n_dgps = dgps;
    cfg.reps_per_dgp = reps.value_or(10);
    cfg.n_train = o.n_train;
    cfg.n_valid = o.n_valid;
    cfg.seed = o.seed;
    cfg.jobs = o.jobs;
    cfg.grid = grid;
    cfg.fit = fit;
    const ValidationResult r = measure_validation_experiment(cfg);
    std::ostringstream rows_csv, summary_csv;
    write_figure6_rows(rows_csv, r);
    write_figure6_summary(summary_csv, r);
    write_csv_text(dir / "figure6_dgps.csv", manifest, rows_csv.str());
    write_csv_text(dir / "figure6_summary.csv", manifest, summary_csv.str());
    std::size_t failed = 0;
    for (const auto& row : r.rows) failed += row.reps_failed;
    manifest.results() = {{"dgps", cfg.n_dgps}, {"reps_per_dgp", cfg.reps_per_dgp}, {"failed_reps", failed}};
  } else {
    throw ValidationError("unknown suite '" + o.suite + "'");
  }
  manifest.write(dir / "manifest.json");
}

// -------------------------------------------------------------- preprocess

struct PreprocessOptions {
  std::string x, out, out_transform, apply;
  bool standardize = false;
  std::optional<double> pca_variance;
};

void cmd_preprocess(const PreprocessOptions& o, const CLI::App& sub) {
  Manifest manifest("preprocess", sub, 0);
  const CsvTable table = read_csv(fs::path(o.x));
  FeatureTransform t;
  if (!o.apply.empty()) {
    if (o.standardize || o.pca_variance) throw ValidationError("--apply cannot be combined with fitting options");
    t = transform_from_json(json::parse(read_text(o.apply)));
  } else {
    t = fit_transform(table.values, o.standardize, o.pca_variance, table.header);
  }
  write_csv(o.out, t.apply(table.values), t.has_pca() ? "pc" : "x");
  manifest.artifact(o.out);
  if (!o.out_transform.empty()) {
    write_text(o.out_transform, transform_to_json(t).dump(2) + "\n");
    manifest.artifact(o.out_transform);
  }
  manifest.results() = {{"outputs", t.n_outputs()}, {"retained_fraction", t.retained_fraction()}};
  manifest.write(sibling_manifest(o.out));
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"Classifier chain networks: fit, predict, evaluate, simulate and benchmark", "ccn"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  SimulateOptions sim;
  auto* s = app.add_subcommand("simulate", "Draw a data set from a built-in or random design");
  s->add_option("--design", sim.design, "strong, weak, six-label, reversed, sequential or increased");
  s->add_option("--design-file", sim.design_file, "Design JSON as written by --out-design");
  s->add_flag("--random-dgp", sim.random_dgp, "Draw a random six-label design");
  s->add_option("--n", sim.n, "Rows (default: the design's 200)");
  s->add_option("--seed", sim.seed)->capture_default_str();
  s->add_option("--out-x", sim.out_x)->required();
  s->add_option("--out-y", sim.out_y)->required();
  s->add_option("--out-design", sim.out_design, "Also write the design as JSON");
  s->add_option("--out-latent", sim.out_latent, "Also write the latent label probabilities");
  s->callback([&] { cmd_simulate(sim, *s); });

  FitOptions fit;
  auto* f = app.add_subcommand("fit", "Fit a model");
  f->add_option("--x", fit.x)->required();
  f->add_option("--y", fit.y)->required();
  f->add_option("--method", fit.method, "ccn, br, cc or cc-prob")->capture_default_str();
  f->add_option("--loss", fit.loss, "bce, focal, asymmetric or huber-hinge")->capture_default_str();
  f->add_option("--xi-plus", fit.xi_plus)->capture_default_str();
  f->add_option("--xi-minus", fit.xi_minus)->capture_default_str();
  f->add_option("--kappa", fit.kappa)->capture_default_str();
  f->add_option("--q", fit.q)->capture_default_str();
  f->add_option("--lambda", fit.lambda)->capture_default_str();
  f->add_flag("--tune", fit.tune, "Select q and lambda by cross-validated grid search");
  f->add_option("--scoring", fit.scoring, "Metric used by --tune")->capture_default_str();
  f->add_option("--q-grid", fit.q_grid)->delimiter(',');
  f->add_option("--lambda-grid", fit.lambda_grid)->delimiter(',');
  f->add_option("--folds", fit.folds)->capture_default_str();
  f->add_option("--order", fit.order, "given, entropy, reversed, or a file of 1-based label indices")
      ->capture_default_str();
  f->add_option("--seed", fit.seed)->capture_default_str();
  f->add_option("--starts", fit.starts, "Random starts besides the informed one")->capture_default_str();
  f->add_flag("--no-informed", fit.no_informed, "Skip the informed start");
  f->add_flag("--freeze-c", fit.freeze_c, "Debug: hold C at zero (ccn only)");
  f->add_option("--chain-inputs", fit.chain_inputs, "Binary CC training inputs: truth or predicted")
      ->check(CLI::IsMember({"truth", "predicted"}))
      ->capture_default_str();
  f->add_option("--out-model", fit.out_model)->required();
  f->callback([&] { cmd_fit(fit, *f); });

  PredictOptions pred;
  auto* p = app.add_subcommand("predict", "Predict labels or probabilities");
  p->add_option("--model", pred.model)->required();
  p->add_option("--x", pred.x)->required();
  p->add_flag("--proba", pred.proba, "Write probabilities instead of 0/1 labels");
  p->add_option("--out", pred.out)->required();
  p->callback([&] { cmd_predict(pred, *p); });

  EvaluateOptions ev;
  auto* e = app.add_subcommand("evaluate", "Score predictions");
  e->add_option("--y-true", ev.y_true)->required();
  e->add_option("--y-pred", ev.y_pred);
  e->add_option("--proba", ev.proba);
  e->add_option("--metrics", ev.metrics, "Comma-separated; default all available")->delimiter(',');
  e->add_option("--out", ev.out, "CSV path; stdout when omitted");
  e->callback([&] { cmd_evaluate(ev, *e); });

  CdepOptions cd;
  auto* c = app.add_subcommand("cdep", "Label interdependency measures");
  c->add_option("--x", cd.x)->required();
  c->add_option("--y", cd.y)->required();
  c->add_option("--metric", cd.metric)->capture_default_str();
  c->add_option("--outer-folds", cd.outer)->capture_default_str();
  c->add_option("--inner-folds", cd.inner)->capture_default_str();
  c->add_option("--lambda-grid", cd.lambda_grid)->delimiter(',');
  c->add_option("--seed", cd.seed)->capture_default_str();
  c->add_option("--out", cd.out, "JSON path; stdout when omitted");
  c->callback([&] { cmd_cdep(cd, *c); });

  BenchOptions bn;
  auto* b = app.add_subcommand("bench", "Run a simulation suite");
  b->add_option("--suite", bn.suite)->check(CLI::IsMember({"table1", "figure6"}))->capture_default_str();
  b->add_option("--reps", bn.reps, "table1: repetitions (50); figure6: DGPSxREPS (20x5)");
  b->add_option("--seed", bn.seed)->capture_default_str();
  b->add_option("--jobs", bn.jobs)->capture_default_str();
  b->add_option("--out-dir", bn.out_dir)->required();
  b->add_option("--designs", bn.designs, "table1 design filter")->delimiter(',');
  b->add_option("--methods", bn.methods, "table1 method filter")->delimiter(',');
  b->add_option("--n-train", bn.n_train)->capture_default_str();
  b->add_option("--n-valid", bn.n_valid)->capture_default_str();
  b->add_option("--starts", bn.starts)->capture_default_str();
  b->add_option("--folds", bn.folds)->capture_default_str();
  b->add_option("--q-grid", bn.q_grid)->delimiter(',');
  b->add_option("--lambda-grid", bn.lambda_grid)->delimiter(',');
  b->callback([&] { cmd_bench(bn, *b); });

  PreprocessOptions pp;
  auto* r = app.add_subcommand("preprocess", "Standardize and/or project features onto principal components");
  r->add_option("--x", pp.x)->required();
  r->add_flag("--standardize", pp.standardize);
  r->add_option("--pca-variance", pp.pca_variance, "Keep the fewest components reaching this variance share");
  r->add_option("--apply", pp.apply, "Reuse a saved transform instead of fitting one");
  r->add_option("--out", pp.out)->required();
  r->add_option("--out-transform", pp.out_transform);
  r->callback([&] { cmd_preprocess(pp, *r); });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
    return 0;
  } catch (const CLI::ParseError& err) {
    return app.exit(err) == 0 ? 0 : 1;
  } catch (const ValidationError& err) {
    log::error(err.what());
    return 1;
  } catch (const NumericalError& err) {
    log::error(err.what());
    return 2;
  } catch (const json::exception& err) {
    log::error(err.what());
    return 1;
  } catch (const fs::filesystem_error& err) {
    log::error(err.what());
    return 1;
  } catch (const std::exception& err) {
    log::error(err.what());
    return 2;
  }
}

}  // namespace ccn
