#include "ccnkit/bench.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <tuple>

#include "ccnkit/io.hpp"
#include "ccnkit/log.hpp"
#include "ccnkit/parallel.hpp"
#include "ccnkit/simgen.hpp"

namespace ccn {

namespace {

std::size_t design_index(const std::string& name) {
  const auto& names = builtin_design_names();
  const auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw ValidationError("unknown design '" + name + "'");
  return static_cast<std::size_t>(it - names.begin());
}

// All metrics of one method on one repetition, in kAllMetrics order.
std::vector<Table1Record> score_method(const Dataset& train, const Dataset& valid, EstimatorKind kind,
                                       const GridSpec& grid, const FitConfig& fit) {
  std::vector<Table1Record> out;
  CvTable table;
  bool cv_ok = true;
  try {
    table = cross_validate(train, kind, grid, fit);
  } catch (const NumericalError& e) {
    log::info(std::string("cross-validation failed: ") + e.what());
    cv_ok = false;
  }
  std::map<std::size_t, Matrix> proba_cache;
  for (MetricKind k : kAllMetrics) {
    Table1Record r;
    r.method = kind;
    r.metric = k;
    if (!cv_ok) {
      out.push_back(r);
      continue;
    }
    try {
      const std::size_t best = select_best(table, k);
      const GridPoint& point = table.points[best];
      r.q = point.q;
      r.lambda = point.lambda;
      auto it = proba_cache.find(best);
      if (it == proba_cache.end()) {
        FitConfig cfg = fit;
        cfg.loss_spec.q = point.q;
        cfg.loss_spec.lambda = point.lambda;
        const FittedModel model = fit_estimator(kind, train, cfg);
        it = proba_cache.emplace(best, model.predict_proba(valid.X)).first;
      }
      r.value = score(k, valid.Y, it->second);
      r.ok = std::isfinite(r.value);
    } catch (const NumericalError& e) {
      log::info(std::string("refit failed: ") + e.what());
    }
    out.push_back(r);
  }
  return out;
}

double sample_sd(const Vector& v, double mean) {
  if (v.size() < 2) return 0.0;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

std::string opt_number(const std::optional<double>& v) { return v ? format_double(*v) : ""; }

}  // namespace

void Table1Config::validate() const {
  if (designs.empty()) throw ValidationError("table1: no designs selected");
  if (methods.empty()) throw ValidationError("table1: no methods selected");
  if (reps == 0) throw ValidationError("table1: reps must be at least 1");
  if (n_train < grid.k_folds) throw ValidationError("table1: n_train is smaller than the fold count");
  if (n_valid == 0) throw ValidationError("table1: n_valid must be positive");
  for (const auto& d : designs) design_index(d);
  grid.validate();
  fit.validate();
}

Table1Result run_table1(const Table1Config& config) {
  config.validate();
  const std::size_t n_designs = config.designs.size(), n_tasks = n_designs * config.reps;
  std::vector<std::vector<Table1Record>> per_task(n_tasks);

  parallel_for(n_tasks, config.jobs, [&](std::size_t task) {
    const std::string& name = config.designs[task / config.reps];
    const std::size_t rep = task % config.reps;
    const std::uint64_t rep_seed = derive_seed(derive_seed(config.seed, design_index(name)), rep);
    Rng rng(rep_seed);
    const SimDesign design = builtin_design(name);
    const Dataset train = generate(design, config.n_train, rng).data;
    const Dataset valid = generate(design, config.n_valid, rng).data;
    GridSpec grid = config.grid;
    grid.seed = derive_seed(rep_seed, 1);
    FitConfig fit = config.fit;
    fit.seed = derive_seed(rep_seed, 2);

    auto& out = per_task[task];
    for (EstimatorKind kind : config.methods) {
      for (Table1Record r : score_method(train, valid, kind, grid, fit)) {
        r.design = name;
        r.rep = rep;
        out.push_back(std::move(r));
      }
    }
    log::info("table1 " + name + " rep " + std::to_string(rep) + " done");
  });

  Table1Result result;
  for (auto& task : per_task)
    for (auto& r : task) result.records.push_back(std::move(r));
  result.summary = summarize_table1(result.records);
  return result;
}

std::vector<Table1Summary> summarize_table1(const std::vector<Table1Record>& records) {
  // (design, method, metric) -> rep -> value; keys keep first-seen order.
  struct Key {
    std::string design;
    EstimatorKind method;
    MetricKind metric;
    bool operator<(const Key& o) const {
      return std::tie(design, method, metric) < std::tie(o.design, o.method, o.metric);
    }
  };
  std::vector<Key> order;
  std::map<Key, std::map<std::size_t, double>> ok_values;
  std::map<Key, std::size_t> failed;
  for (const auto& r : records) {
    const Key key{r.design, r.method, r.metric};
    if (!ok_values.count(key)) order.push_back(key);
    auto& vals = ok_values[key];
    if (r.ok) vals[r.rep] = r.value;
    else ++failed[key];
  }

  std::vector<Table1Summary> out;
  for (const Key& key : order) {
    Table1Summary s;
    s.design = key.design;
    s.method = key.method;
    s.metric = key.metric;
    const auto& vals = ok_values[key];
    s.n_ok = vals.size();
    s.n_failed = failed.count(key) ? failed[key] : 0;
    Vector v;
    for (const auto& [rep, value] : vals) v.push_back(value);
    if (!v.empty()) {
      double sum = 0.0;
      for (double x : v) sum += x;
      s.mean = sum / static_cast<double>(v.size());
      s.sd = sample_sd(v, s.mean);
    } else {
      s.mean = s.sd = std::nan("");
    }
    if (key.method != EstimatorKind::ccn) {
      const Key ref{key.design, EstimatorKind::ccn, key.metric};
      const auto it = ok_values.find(ref);
      if (it != ok_values.end()) {
        Vector a, b;
        for (const auto& [rep, value] : vals) {
          const auto c = it->second.find(rep);
          if (c == it->second.end()) continue;
          a.push_back(c->second);
          b.push_back(value);
          s.ccn_better += better(key.metric, c->second, value);
        }
        s.n_paired = a.size();
        try {
          s.wilcoxon_p = wilcoxon_signed_rank(a, b).p_value;
        } catch (const InsufficientDataError&) {
        }
      }
    }
    out.push_back(s);
  }
  return out;
}

void write_table1_records(std::ostream& out, const std::vector<Table1Record>& records) {
  out << "design,rep,method,metric,status,value,q,lambda\n";
  for (const auto& r : records) {
    out << r.design << ',' << r.rep << ',' << to_string(r.method) << ',' << to_string(r.metric) << ','
        << (r.ok ? "ok" : "failed") << ',' << (r.ok ? format_double(r.value) : "") << ','
        << format_double(r.q) << ',' << format_double(r.lambda) << '\n';
  }
}

void write_table1_summary(std::ostream& out, const std::vector<Table1Summary>& summary) {
  out << "design,method,metric,direction,n_ok,n_failed,mean,sd,n_paired,ccn_better,wilcoxon_p_vs_ccn\n";
  for (const auto& s : summary) {
    out << s.design << ',' << to_string(s.method) << ',' << to_string(s.metric) << ','
        << (lower_is_better(s.metric) ? "lower" : "higher") << ',' << s.n_ok << ',' << s.n_failed << ','
        << format_double(s.mean) << ',' << format_double(s.sd) << ',' << s.n_paired << ',' << s.ccn_better
        << ',' << opt_number(s.wilcoxon_p) << '\n';
  }
}

void write_figure6_rows(std::ostream& out, const ValidationResult& result) {
  out << "dgp,reps_used,reps_failed,excess_hamming,label_density,label_dependency,label_dependency_reps,"
         "unconditional_dependency,conditional_dependency\n";
  for (const auto& r : result.rows) {
    out << r.dgp << ',' << r.reps_used << ',' << r.reps_failed << ',' << format_double(r.excess_hamming) << ','
        << format_double(r.label_density) << ',' << format_double(r.label_dependency) << ','
        << r.label_dependency_reps << ',' << format_double(r.unconditional_dependency) << ','
        << format_double(r.conditional_dependency) << '\n';
  }
}

void write_figure6_summary(std::ostream& out, const ValidationResult& result) {
  out << "measure,spearman_rho,p_value,computable\n";
  const std::pair<const char*, const std::optional<SpearmanResult>*> rows[] = {
      {"label_density", &result.rho_density},
      {"label_dependency", &result.rho_dependency},
      {"unconditional_dependency", &result.rho_unconditional},
      {"conditional_dependency", &result.rho_conditional}};
  for (const auto& [name, r] : rows) {
    out << name << ',';
    if (*r) out << format_double((*r)->rho) << ',' << format_double((*r)->p_value) << ",yes\n";
    else out << ",,no\n";
  }
}

}  // namespace ccn
