#include "ccnkit/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace ccn {

void OptimizerConfig::validate() const {
  if (!(c1 > 0.0 && c1 < c2 && c2 < 1.0)) throw ValidationError("optimizer: need 0 < c1 < c2 < 1");
  if (!(eps_c > 0.0)) throw ValidationError("optimizer: eps_c must be positive");
  if (max_linesearch == 0) throw ValidationError("optimizer: max_linesearch must be positive");
}

std::string_view to_string(OptimizerStatus s) {
  switch (s) {
    case OptimizerStatus::converged: return "converged";
    case OptimizerStatus::max_iters: return "max-iters";
    case OptimizerStatus::linesearch_stalled: return "linesearch-stalled";
  }
  return "?";
}

namespace {

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double d) { return std::isfinite(d); });
}

struct Probe {
  double step;
  double f;
  double slope;  // g(x + step d) . d
  Vector grad;
};

// Minimizer of the cubic through (a, fa, da), (b, fb, db), if it exists.
std::optional<double> cubic_minimizer(double a, double fa, double da, double b, double fb, double db) {
  const double d1 = da + db - 3.0 * (fa - fb) / (a - b);
  const double disc = d1 * d1 - da * db;
  if (!(disc >= 0.0)) return std::nullopt;
  const double d2 = std::copysign(std::sqrt(disc), b - a);
  const double denom = db - da + 2.0 * d2;
  if (denom == 0.0) return std::nullopt;
  const double t = b - (b - a) * (db + d2 - d1) / denom;
  if (!std::isfinite(t)) return std::nullopt;
  return t;
}

class LineSearch {
 public:
  LineSearch(const Objective& objective, std::span<const double> x, std::span<const double> d,
             double f0, double slope0, const OptimizerConfig& config)
      : objective_(objective), x_(x), d_(d), f0_(f0), slope0_(slope0), config_(config),
        trial_(x.size()) {}

  std::optional<Probe> run() {
    Probe prev{0.0, f0_, slope0_, {}};
    double step = 1.0;
    for (std::size_t i = 0; evaluations_ < config_.max_linesearch; ++i) {
      Probe cur = evaluate(step);
      if (!std::isfinite(cur.f) || !std::isfinite(cur.slope)) {
        step = 0.5 * (prev.step + step);
        continue;
      }
      if (cur.f > f0_ + config_.c1 * step * slope0_ || (i > 0 && cur.f >= prev.f)) {
        return zoom(prev, cur);
      }
      if (std::abs(cur.slope) <= -config_.c2 * slope0_) return cur;
      if (cur.slope >= 0.0) return zoom(cur, prev);
      prev = std::move(cur);
      step *= 2.0;
    }
    return std::nullopt;
  }

  std::size_t evaluations() const { return evaluations_; }
  /// Lowest Armijo-satisfying probe seen, if any.
  const std::optional<Probe>& best() const { return best_; }

 private:
  Probe evaluate(double step) {
    ++evaluations_;
    for (std::size_t k = 0; k < x_.size(); ++k) trial_[k] = x_[k] + step * d_[k];
    Probe p{step, 0.0, 0.0, Vector(x_.size())};
    p.f = objective_(trial_, p.grad);
    p.slope = all_finite(p.grad) ? dot(p.grad, d_) : std::numeric_limits<double>::quiet_NaN();
    if (std::isfinite(p.f) && std::isfinite(p.slope) && p.f <= f0_ + config_.c1 * step * slope0_ &&
        (!best_ || p.f < best_->f)) {
      best_ = p;
    }
    return p;
  }

  std::optional<Probe> zoom(Probe lo, Probe hi) {
    while (evaluations_ < config_.max_linesearch) {
      const double a = lo.step;
      const double b = hi.step;
      const double width = std::abs(b - a);
      if (width <= std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(a))) break;
      double step = 0.5 * (a + b);
      if (std::isfinite(hi.f) && std::isfinite(hi.slope)) {
        if (auto t = cubic_minimizer(a, lo.f, lo.slope, b, hi.f, hi.slope)) {
          const double lo_edge = std::min(a, b) + 0.1 * width;
          const double hi_edge = std::max(a, b) - 0.1 * width;
          if (*t >= lo_edge && *t <= hi_edge) step = *t;
        }
      }
      Probe cur = evaluate(step);
      if (!std::isfinite(cur.f) || !std::isfinite(cur.slope) ||
          cur.f > f0_ + config_.c1 * step * slope0_ || cur.f >= lo.f) {
        hi = std::move(cur);
        continue;
      }
      if (std::abs(cur.slope) <= -config_.c2 * slope0_) return cur;
      if (cur.slope * (hi.step - lo.step) >= 0.0) hi = lo;
      lo = std::move(cur);
    }
    return std::nullopt;
  }

  const Objective& objective_;
  std::span<const double> x_;
  std::span<const double> d_;
  double f0_;
  double slope0_;
  const OptimizerConfig& config_;
  Vector trial_;
  std::size_t evaluations_ = 0;
  std::optional<Probe> best_;
};

}  // namespace

LineSearchResult wolfe_linesearch(const Objective& objective, std::span<const double> x,
                                  std::span<const double> d, double f0, std::span<const double> g0,
                                  const OptimizerConfig& config) {
  config.validate();
  if (x.size() != d.size() || x.size() != g0.size()) throw ValidationError("linesearch: dimension mismatch");
  const double slope0 = dot(g0, d);
  if (!(slope0 < 0.0)) throw ValidationError("linesearch: direction is not a descent direction");
  LineSearch search(objective, x, d, f0, slope0, config);
  auto found = search.run();
  if (!found) {
    throw LineSearchError("linesearch: no strong Wolfe step within " +
                          std::to_string(config.max_linesearch) + " evaluations");
  }
  return {found->step, found->f, std::move(found->grad), search.evaluations()};
}

OptimizerResult minimize(const Objective& objective, Vector x0, const OptimizerConfig& config) {
  config.validate();
  const std::size_t n = x0.size();
  OptimizerResult result;
  result.x = std::move(x0);
  result.grad.assign(n, 0.0);
  result.f = objective(result.x, result.grad);
  if (!std::isfinite(result.f) || !all_finite(result.grad)) {
    throw OptimizerError("optimizer: objective or gradient is not finite at the starting point",
                         result.x, result.f);
  }
  result.trace.push_back(result.f);

  Matrix h = Matrix::identity(n);
  Vector d(n), s(n), y(n), hy(n);
  auto grad_small = [&](std::span<const double> g) {
    return std::all_of(g.begin(), g.end(), [&](double v) { return std::abs(v) <= config.grad_tol; });
  };

  result.status = OptimizerStatus::max_iters;
  if (n == 0 || grad_small(result.grad)) {
    result.status = OptimizerStatus::converged;
    result.inverse_hessian = std::move(h);
    return result;
  }

  while (result.iterations < config.max_iters) {
    for (std::size_t i = 0; i < n; ++i) d[i] = -dot(h.row(i), result.grad);
    double slope = dot(result.grad, d);
    if (!(slope < 0.0)) {
      // Lost descent through round-off; restart from steepest descent.
      h = Matrix::identity(n);
      for (std::size_t i = 0; i < n; ++i) d[i] = -result.grad[i];
      slope = dot(result.grad, d);
    }

    LineSearch search(objective, result.x, d, result.f, slope, config);
    auto found = search.run();
    if (!found) {
      if (const auto& best = search.best(); best && best->f < result.f) {
        for (std::size_t i = 0; i < n; ++i) result.x[i] += best->step * d[i];
        result.f = best->f;
        result.grad = best->grad;
        result.trace.push_back(result.f);
        ++result.iterations;
      }
      result.status = OptimizerStatus::linesearch_stalled;
      result.inverse_hessian = std::move(h);
      return result;
    }

    const double f_prev = result.f;
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = found->step * d[i];
      y[i] = found->grad[i] - result.grad[i];
      result.x[i] += s[i];
    }
    result.f = found->f;
    result.grad = std::move(found->grad);
    result.trace.push_back(result.f);
    ++result.iterations;

    const double ys = dot(y, s);
    const double ny = std::sqrt(dot(y, y));
    const double ns = std::sqrt(dot(s, s));
    if (ys > 1e-10 * ny * ns) {
      // H <- (I - rho s y^T) H (I - rho y s^T) + rho s s^T
      const double rho = 1.0 / ys;
      for (std::size_t i = 0; i < n; ++i) hy[i] = dot(h.row(i), y);
      const double yhy = dot(y, hy);
      const double ss_coef = rho * rho * yhy + rho;
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
          const double v = h(i, j) - rho * (s[i] * hy[j] + hy[i] * s[j]) + ss_coef * s[i] * s[j];
          h(i, j) = v;
          h(j, i) = v;
        }
      }
    }

    bool converged;
    if (result.f > 0.0) {
      converged = f_prev / result.f - 1.0 <= config.eps_c;
    } else {
      converged = std::abs(f_prev - result.f) <= config.eps_c;
    }
    if (converged || grad_small(result.grad)) {
      result.status = OptimizerStatus::converged;
      break;
    }
  }
  result.inverse_hessian = std::move(h);
  return result;
}

}  // namespace ccn
