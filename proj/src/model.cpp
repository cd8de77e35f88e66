#include "ccnkit/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ccnkit/error.hpp"

namespace ccn {

std::string_view to_string(Activation a) {
  return a == Activation::sigmoid ? "sigmoid" : "identity";
}

std::string_view to_string(LossKind k) {
  switch (k) {
    case LossKind::bce: return "bce";
    case LossKind::focal: return "focal";
    case LossKind::asymmetric: return "asymmetric";
    case LossKind::huber_hinge: return "huber-hinge";
  }
  return "?";
}

std::string_view to_string(Propagation p) {
  return p == Propagation::probability ? "probability" : "binary";
}

Activation parse_activation(std::string_view s) {
  if (s == "sigmoid") return Activation::sigmoid;
  if (s == "identity") return Activation::identity;
  throw ValidationError("unknown activation '" + std::string(s) + "'");
}

LossKind parse_loss_kind(std::string_view s) {
  if (s == "bce") return LossKind::bce;
  if (s == "focal") return LossKind::focal;
  if (s == "asymmetric") return LossKind::asymmetric;
  if (s == "huber-hinge" || s == "huber_hinge") return LossKind::huber_hinge;
  throw ValidationError("unknown loss kind '" + std::string(s) + "'");
}

Propagation parse_propagation(std::string_view s) {
  if (s == "probability") return Propagation::probability;
  if (s == "binary") return Propagation::binary;
  throw ValidationError("unknown propagation '" + std::string(s) + "'");
}

void LossSpec::validate() const {
  if (!(q >= 1.0) || !std::isfinite(q)) throw ValidationError("loss: q must be >= 1");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ValidationError("loss: lambda must be >= 0");
  if (!(kappa > -1.0)) throw ValidationError("loss: kappa must be > -1");
  if (!(xi_plus >= 0.0) || !(xi_minus >= 0.0)) throw ValidationError("loss: xi must be >= 0");
}

ModelParams ModelParams::zeros(std::size_t n_labels, std::size_t n_features) {
  return {Vector(n_labels, 0.0), Matrix(n_labels, n_features), Matrix(n_labels, n_labels)};
}

void ModelParams::validate() const {
  const std::size_t l = b.size();
  if (W.rows() != l) throw ValidationError("params: W has " + std::to_string(W.rows()) + " rows, expected " + std::to_string(l));
  if (C.rows() != l || C.cols() != l) throw ValidationError("params: C must be " + std::to_string(l) + "x" + std::to_string(l));
  for (std::size_t k = 0; k < l; ++k)
    for (std::size_t j = k; j < l; ++j)
      if (C(k, j) != 0.0) throw ValidationError("params: C must be strictly lower triangular");
  auto finite = [](std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [](double d) { return std::isfinite(d); });
  };
  if (!finite(b) || !finite(W.data()) || !finite(C.data())) throw ValidationError("params: non-finite entry");
}

std::size_t ModelParams::flat_size(std::size_t n_labels, std::size_t n_features, Dependencies deps) {
  std::size_t n = n_labels * (n_features + 1);
  if (deps == Dependencies::free) n += n_labels * (n_labels - (n_labels > 0 ? 1 : 0)) / 2;
  return n;
}

std::size_t penalty_count(std::size_t n_labels, std::size_t n_features, Dependencies deps) {
  std::size_t r = n_labels * n_features;
  if (deps == Dependencies::free && n_labels > 1) r += n_labels * (n_labels - 1) / 2;
  return r;
}

namespace {

template <typename B, typename W, typename C>
Vector flatten(const B& b, const W& w, const C& c, Dependencies deps) {
  Vector flat;
  flat.reserve(ModelParams::flat_size(b.size(), w.cols(), deps));
  flat.insert(flat.end(), b.begin(), b.end());
  flat.insert(flat.end(), w.data().begin(), w.data().end());
  if (deps == Dependencies::free)
    for (std::size_t k = 1; k < c.rows(); ++k)
      for (std::size_t j = 0; j < k; ++j) flat.push_back(c(k, j));
  return flat;
}

void check_shapes(const ModelParams& params, const Matrix& x) {
  if (params.W.rows() != params.b.size() || params.C.rows() != params.b.size() ||
      params.C.cols() != params.b.size()) {
    throw ValidationError("params: inconsistent label counts in b, W, C");
  }
  if (x.cols() != params.W.cols()) {
    throw ValidationError("feature count mismatch: X has " + std::to_string(x.cols()) +
                          " columns, model expects " + std::to_string(params.W.cols()));
  }
}

void check_labels(const Matrix& x, const Matrix& y, std::size_t n_labels) {
  if (y.rows() != x.rows()) {
    throw ValidationError("X has " + std::to_string(x.rows()) + " rows but Y has " +
                          std::to_string(y.rows()));
  }
  if (y.cols() != n_labels) {
    throw ValidationError("Y has " + std::to_string(y.cols()) + " columns, model has " +
                          std::to_string(n_labels) + " labels");
  }
  if (x.rows() == 0) throw ValidationError("loss requires at least one observation");
}

double activate(double theta, Activation activation) {
  if (activation == Activation::identity) return theta;
  if (theta >= 0.0) return 1.0 / (1.0 + std::exp(-theta));
  const double e = std::exp(theta);
  return e / (1.0 + e);
}

double clip(double p) { return std::clamp(p, kProbClip, 1.0 - kProbClip); }

double xi_for(const LossSpec& spec, int y) {
  switch (spec.kind) {
    case LossKind::bce: return 0.0;
    case LossKind::focal: return spec.xi_plus;
    case LossKind::asymmetric: return y == 1 ? spec.xi_plus : spec.xi_minus;
    case LossKind::huber_hinge: return 0.0;
  }
  return 0.0;
}

// One observation: fills theta/p for row `x_row`.
void forward_row(const ModelParams& params, std::span<const double> x_row, Activation activation,
                 Propagation propagation, std::span<double> theta, std::span<double> p) {
  const std::size_t l = params.b.size();
  for (std::size_t k = 0; k < l; ++k) {
    double t = params.b[k] + dot(params.W.row(k), x_row);
    for (std::size_t j = 0; j < k; ++j) {
      const double input = propagation == Propagation::probability ? p[j] : threshold(p[j], activation);
      t += params.C(k, j) * input;
    }
    theta[k] = t;
    p[k] = activate(t, activation);
  }
}

double penalty(const ModelParams& params, const LossSpec& spec, Dependencies deps) {
  if (spec.lambda == 0.0) return 0.0;
  const std::size_t r = penalty_count(params.n_labels(), params.n_features(), deps);
  if (r == 0) return 0.0;
  double sq = 0.0;
  for (double v : params.W.data()) sq += v * v;
  if (deps == Dependencies::free)
    for (double v : params.C.data()) sq += v * v;
  return spec.lambda / static_cast<double>(r) * sq;
}

double aggregate(std::span<const double> h, double q) {
  if (q == 1.0) {
    double s = 0.0;
    for (double v : h) s += v;
    return s;
  }
  double s = 0.0;
  for (double v : h) s += std::pow(v, q);
  return std::pow(s, 1.0 / q);
}

}  // namespace

Vector ModelParams::to_flat(Dependencies deps) const { return flatten(b, W, C, deps); }

Vector Gradient::to_flat(Dependencies deps) const { return flatten(b, W, C, deps); }

ModelParams ModelParams::from_flat(std::span<const double> flat, std::size_t n_labels,
                                   std::size_t n_features, Dependencies deps) {
  if (flat.size() != flat_size(n_labels, n_features, deps)) {
    throw ValidationError("from_flat: expected " + std::to_string(flat_size(n_labels, n_features, deps)) +
                          " values, got " + std::to_string(flat.size()));
  }
  ModelParams params = zeros(n_labels, n_features);
  std::size_t pos = 0;
  for (std::size_t k = 0; k < n_labels; ++k) params.b[k] = flat[pos++];
  for (double& w : params.W.data()) w = flat[pos++];
  if (deps == Dependencies::free)
    for (std::size_t k = 1; k < n_labels; ++k)
      for (std::size_t j = 0; j < k; ++j) params.C(k, j) = flat[pos++];
  return params;
}

ForwardCache forward(const ModelParams& params, const Matrix& x, Activation activation,
                     Propagation propagation) {
  check_shapes(params, x);
  const std::size_t l = params.n_labels();
  ForwardCache cache{Matrix(x.rows(), l), Matrix(x.rows(), l)};
  for (std::size_t i = 0; i < x.rows(); ++i)
    forward_row(params, x.row(i), activation, propagation, cache.theta.row(i), cache.p.row(i));
  return cache;
}

Matrix threshold(const Matrix& p, Activation activation) {
  Matrix out(p.rows(), p.cols());
  auto src = p.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = threshold(src[i], activation);
  return out;
}

Matrix predict(const ModelParams& params, const Matrix& x, Activation activation,
               Propagation propagation) {
  return threshold(forward(params, x, activation, propagation).p, activation);
}

double per_label_loss(const LossSpec& spec, int y, double p) {
  if (spec.kind == LossKind::huber_hinge) {
    const double z = (2.0 * y - 1.0) * p;
    const double kappa = spec.kappa;
    if (z <= -kappa) return 1.0 - z - 0.5 * (kappa + 1.0);
    const double slack = std::max(0.0, 1.0 - z);
    return slack * slack / (2.0 * (kappa + 1.0));
  }
  const double pc = clip(p);
  const double xi = xi_for(spec, y);
  if (y == 1) {
    const double focus = xi == 0.0 ? 1.0 : std::pow(1.0 - pc, xi);
    return -focus * std::log(pc);
  }
  const double focus = xi == 0.0 ? 1.0 : std::pow(pc, xi);
  return -focus * std::log1p(-pc);
}

double per_label_loss_derivative(const LossSpec& spec, int y, double p) {
  if (spec.kind == LossKind::huber_hinge) {
    const double sign = 2.0 * y - 1.0;
    const double z = sign * p;
    const double kappa = spec.kappa;
    if (z <= -kappa) return -sign;
    if (z >= 1.0) return 0.0;
    return -sign * (1.0 - z) / (kappa + 1.0);
  }
  const double pc = clip(p);
  const double xi = xi_for(spec, y);
  if (y == 1) {
    // d/dp [ -(1-p)^xi log p ]
    const double nlog = -std::log(pc);
    if (xi == 0.0) return -1.0 / pc;
    return -xi * std::pow(1.0 - pc, xi - 1.0) * nlog - std::pow(1.0 - pc, xi) / pc;
  }
  // d/dp [ -p^xi log(1-p) ]
  const double nlog = -std::log1p(-pc);
  if (xi == 0.0) return 1.0 / (1.0 - pc);
  return xi * std::pow(pc, xi - 1.0) * nlog + std::pow(pc, xi) / (1.0 - pc);
}

double loss(const ModelParams& params, const Matrix& x, const Matrix& y, const LossSpec& spec,
            Activation activation, Dependencies deps) {
  check_shapes(params, x);
  check_labels(x, y, params.n_labels());
  spec.validate();
  const std::size_t l = params.n_labels();
  Vector theta(l), p(l), h(l);
  double total = 0.0;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    forward_row(params, x.row(i), activation, Propagation::probability, theta, p);
    auto yi = y.row(i);
    for (std::size_t k = 0; k < l; ++k) h[k] = per_label_loss(spec, yi[k] != 0.0, p[k]);
    total += aggregate(h, spec.q);
  }
  const double scale = 1.0 / (static_cast<double>(x.rows()) * std::pow(static_cast<double>(l), 1.0 / spec.q));
  return scale * total + penalty(params, spec, deps);
}

double loss_and_gradient(const ModelParams& params, const Matrix& x, const Matrix& y,
                         const LossSpec& spec, Activation activation, Gradient& grad,
                         Dependencies deps) {
  check_shapes(params, x);
  check_labels(x, y, params.n_labels());
  spec.validate();
  const std::size_t l = params.n_labels();
  const std::size_t m = params.n_features();
  grad.b.assign(l, 0.0);
  grad.W = Matrix(l, m);
  grad.C = Matrix(l, l);

  const double q = spec.q;
  const double scale = 1.0 / (static_cast<double>(x.rows()) * std::pow(static_cast<double>(l), 1.0 / q));
  Vector theta(l), p(l), h(l), dh(l), delta(l);
  double total = 0.0;

  for (std::size_t i = 0; i < x.rows(); ++i) {
    auto xi = x.row(i);
    auto yi = y.row(i);
    forward_row(params, xi, activation, Propagation::probability, theta, p);
    for (std::size_t k = 0; k < l; ++k) {
      const int label = yi[k] != 0.0;
      h[k] = per_label_loss(spec, label, p[k]);
      dh[k] = per_label_loss_derivative(spec, label, p[k]);
    }
    const double li = aggregate(h, q);
    total += li;

    // dL_i/dh_k of the l_q norm; zero at the all-zero loss vector.
    if (q != 1.0) {
      if (li == 0.0) {
        std::fill(dh.begin(), dh.end(), 0.0);
      } else {
        const double outer = std::pow(li, 1.0 - q);
        for (std::size_t k = 0; k < l; ++k) dh[k] *= std::pow(h[k], q - 1.0) * outer;
      }
    }

    // Backward through the chain: delta_k = dL/dtheta_k.
    for (std::size_t kk = l; kk-- > 0;) {
      double upstream = scale * dh[kk];
      for (std::size_t j = kk + 1; j < l; ++j) upstream += params.C(j, kk) * delta[j];
      const double dp_dtheta = activation == Activation::sigmoid ? p[kk] * (1.0 - p[kk]) : 1.0;
      delta[kk] = upstream * dp_dtheta;
    }

    for (std::size_t k = 0; k < l; ++k) {
      const double d = delta[k];
      grad.b[k] += d;
      auto gw = grad.W.row(k);
      for (std::size_t c = 0; c < m; ++c) gw[c] += d * xi[c];
      if (deps == Dependencies::free)
        for (std::size_t j = 0; j < k; ++j) grad.C(k, j) += d * p[j];
    }
  }

  if (spec.lambda != 0.0) {
    const std::size_t r = penalty_count(l, m, deps);
    if (r > 0) {
      const double coef = 2.0 * spec.lambda / static_cast<double>(r);
      auto gw = grad.W.data();
      auto w = params.W.data();
      for (std::size_t t = 0; t < gw.size(); ++t) gw[t] += coef * w[t];
      if (deps == Dependencies::free)
        for (std::size_t k = 1; k < l; ++k)
          for (std::size_t j = 0; j < k; ++j) grad.C(k, j) += coef * params.C(k, j);
    }
  }

  return scale * total + penalty(params, spec, deps);
}

Gradient gradient(const ModelParams& params, const Matrix& x, const Matrix& y, const LossSpec& spec,
                  Activation activation, Dependencies deps) {
  Gradient grad;
  loss_and_gradient(params, x, y, spec, activation, grad, deps);
  return grad;
}

}  // namespace ccn
