#include "ccnkit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "ccnkit/dataset.hpp"
#include "ccnkit/special.hpp"

namespace ccn {

namespace {

void check_shapes(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ValidationError("shape mismatch: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                          " vs " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
  if (a.empty()) throw ValidationError("metrics need at least one cell");
}

struct Counts {
  double tp = 0, fp = 0, fn = 0;
};

double f1(const Counts& c) {
  const double denom = 2.0 * c.tp + c.fp + c.fn;
  return denom == 0.0 ? 1.0 : 2.0 * c.tp / denom;
}

Counts column_counts(const Matrix& y, const Matrix& yhat, std::size_t j) {
  Counts c;
  for (std::size_t i = 0; i < y.rows(); ++i) {
    const bool t = y(i, j) != 0.0, p = yhat(i, j) != 0.0;
    c.tp += t && p;
    c.fp += !t && p;
    c.fn += t && !p;
  }
  return c;
}

}  // namespace

std::string_view to_string(MetricKind k) {
  switch (k) {
    case MetricKind::hamming: return "hamming";
    case MetricKind::zero_one: return "zero-one";
    case MetricKind::nll: return "nll";
    case MetricKind::micro_f1: return "micro-f1";
    case MetricKind::macro_f1: return "macro-f1";
  }
  return "?";
}

MetricKind parse_metric(std::string_view s) {
  for (MetricKind k : kAllMetrics)
    if (to_string(k) == s) return k;
  if (s == "zero_one") return MetricKind::zero_one;
  if (s == "micro_f1") return MetricKind::micro_f1;
  if (s == "macro_f1") return MetricKind::macro_f1;
  throw ValidationError("unknown metric '" + std::string(s) + "'");
}

double hamming(const Matrix& y, const Matrix& yhat) {
  check_shapes(y, yhat);
  std::size_t wrong = 0;
  for (std::size_t k = 0; k < y.size(); ++k) wrong += y.data()[k] != yhat.data()[k];
  return static_cast<double>(wrong) / static_cast<double>(y.size());
}

double zero_one(const Matrix& y, const Matrix& yhat) {
  check_shapes(y, yhat);
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < y.rows(); ++i) {
    const auto a = y.row(i), b = yhat.row(i);
    wrong += !std::equal(a.begin(), a.end(), b.begin());
  }
  return static_cast<double>(wrong) / static_cast<double>(y.rows());
}

double micro_f1(const Matrix& y, const Matrix& yhat) {
  check_shapes(y, yhat);
  Counts total;
  for (std::size_t j = 0; j < y.cols(); ++j) {
    const Counts c = column_counts(y, yhat, j);
    total.tp += c.tp;
    total.fp += c.fp;
    total.fn += c.fn;
  }
  return f1(total);
}

double macro_f1(const Matrix& y, const Matrix& yhat) {
  check_shapes(y, yhat);
  double sum = 0.0;
  for (std::size_t j = 0; j < y.cols(); ++j) sum += f1(column_counts(y, yhat, j));
  return sum / static_cast<double>(y.cols());
}

double nll(const Matrix& y, const Matrix& p) {
  check_shapes(y, p);
  double sum = 0.0;
  for (std::size_t k = 0; k < y.size(); ++k) {
    const double pk = std::clamp(p.data()[k], kProbClip, 1.0 - kProbClip);
    sum -= y.data()[k] != 0.0 ? std::log(pk) : std::log1p(-pk);
  }
  return sum / static_cast<double>(y.size());
}

double score(MetricKind k, const Matrix& y, const Matrix& p, Activation activation) {
  if (k == MetricKind::nll) return nll(y, p);
  const Matrix yhat = threshold(p, activation);
  switch (k) {
    case MetricKind::hamming: return hamming(y, yhat);
    case MetricKind::zero_one: return zero_one(y, yhat);
    case MetricKind::micro_f1: return micro_f1(y, yhat);
    case MetricKind::macro_f1: return macro_f1(y, yhat);
    case MetricKind::nll: break;
  }
  return 0.0;
}

Vector average_ranks(std::span<const double> v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  Vector ranks(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[idx[k]] = r;
    i = j + 1;
  }
  return ranks;
}

WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ValidationError("wilcoxon: samples differ in length");
  Vector diff, mag;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    if (d != 0.0) {
      diff.push_back(d);
      mag.push_back(std::abs(d));
    }
  }
  const std::size_t n = diff.size();
  if (n < 10) {
    throw InsufficientDataError("wilcoxon: " + std::to_string(n) + " nonzero differences, need at least 10");
  }
  const Vector ranks = average_ranks(mag);
  WilcoxonResult r;
  r.n_used = n;
  for (std::size_t i = 0; i < n; ++i)
    if (diff[i] > 0.0) r.w_plus += ranks[i];

  // Tie correction: sum over tie groups of (t^3 - t) / 48.
  Vector sorted = mag;
  std::sort(sorted.begin(), sorted.end());
  double tie = 0.0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && sorted[j] == sorted[i]) ++j;
    const double t = static_cast<double>(j - i);
    tie += t * t * t - t;
    i = j;
  }
  const double nd = static_cast<double>(n);
  const double mean = nd * (nd + 1.0) / 4.0;
  const double var = nd * (nd + 1.0) * (2.0 * nd + 1.0) / 24.0 - tie / 48.0;
  r.z = (r.w_plus - mean) / std::sqrt(var);
  r.p_value = std::min(1.0, 2.0 * normal_sf(std::abs(r.z)));
  return r;
}

std::optional<SpearmanResult> spearman(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ValidationError("spearman: samples differ in length");
  const std::size_t n = a.size();
  if (n < 3) return std::nullopt;
  const Vector ra = average_ranks(a), rb = average_ranks(b);
  const double mean = (static_cast<double>(n) + 1.0) / 2.0;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sab += (ra[i] - mean) * (rb[i] - mean);
    saa += (ra[i] - mean) * (ra[i] - mean);
    sbb += (rb[i] - mean) * (rb[i] - mean);
  }
  if (saa == 0.0 || sbb == 0.0) return std::nullopt;
  SpearmanResult r;
  r.rho = std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
  const double dof = static_cast<double>(n) - 2.0;
  if (std::abs(r.rho) >= 1.0) {
    r.p_value = 0.0;
  } else {
    r.p_value = student_t_two_sided(r.rho * std::sqrt(dof / (1.0 - r.rho * r.rho)), dof);
  }
  return r;
}

}  // namespace ccn
