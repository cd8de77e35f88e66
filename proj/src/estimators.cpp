#include "ccnkit/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace ccn {

namespace {

void check_permutation(const Permutation& p, std::size_t n_labels) {
  if (p.size() != n_labels) {
    throw ValidationError("label order has " + std::to_string(p.size()) + " entries for " +
                          std::to_string(n_labels) + " labels");
  }
  std::vector<bool> seen(n_labels, false);
  for (std::size_t v : p) {
    if (v >= n_labels || seen[v]) throw ValidationError("label order is not a permutation");
    seen[v] = true;
  }
}

void check_fit_data(const Dataset& data) {
  data.validate();
  if (data.n() < 2) throw ValidationError("fitting requires at least 2 observations");
  if (data.L() == 0) throw ValidationError("fitting requires at least one label");
}

bool has_constant_label(const Matrix& y) {
  for (std::size_t j = 0; j < y.cols(); ++j) {
    bool constant = true;
    for (std::size_t i = 1; i < y.rows() && constant; ++i) constant = y(i, j) == y(0, j);
    if (constant) return true;
  }
  return false;
}

Objective model_objective(const Matrix& x, const Matrix& y, const LossSpec& spec,
                          Activation activation, std::size_t n_labels, Dependencies deps) {
  const std::size_t m = x.cols();
  return [&x, &y, spec, activation, n_labels, m, deps](std::span<const double> v,
                                                         std::span<double> g) {
    Gradient grad;
    const double f = loss_and_gradient(ModelParams::from_flat(v, n_labels, m, deps), x, y, spec,
                                       activation, grad, deps);
    const Vector flat = grad.to_flat(deps);
    std::copy(flat.begin(), flat.end(), g.begin());
    return f;
  };
}

struct ChainFit {
  ModelParams params;
  double mean_stage_loss = 0.0;
};

// Stagewise chain on already-permuted labels.
ChainFit fit_chain(const Matrix& x, const Matrix& y, const FitConfig& config, Propagation propagation) {
  const std::size_t n = x.rows(), m = x.cols(), l = y.cols();
  ChainFit out{ModelParams::zeros(l, m), 0.0};
  Matrix features = x;
  for (std::size_t k = 0; k < l; ++k) {
    const Vector target = y.col(k);
    OptimizerResult r;
    try {
      r = fit_single_label(features, target, config.loss_spec, config.activation, config.optimizer);
    } catch (const NumericalError& e) {
      throw FitError("chain stage " + std::to_string(k) + " failed: " + e.what());
    }
    out.mean_stage_loss += r.f / static_cast<double>(l);
    const ModelParams stage = ModelParams::from_flat(r.x, 1, features.cols());
    out.params.b[k] = stage.b[0];
    for (std::size_t j = 0; j < m; ++j) out.params.W(k, j) = stage.W(0, j);
    for (std::size_t j = 0; j < k; ++j) out.params.C(k, j) = stage.W(0, m + j);
    if (k + 1 == l) break;

    Matrix z(n, 1);
    const bool use_truth = propagation == Propagation::binary && config.chain_inputs == ChainInputs::truth;
    if (use_truth) {
      for (std::size_t i = 0; i < n; ++i) z(i, 0) = target[i];
    } else {
      const Matrix p = forward(stage, features, config.activation).p;
      for (std::size_t i = 0; i < n; ++i) {
        z(i, 0) = propagation == Propagation::binary ? threshold(p(i, 0), config.activation) : p(i, 0);
      }
    }
    features = hstack(features, z);
  }
  return out;
}

}  // namespace

Permutation LabelOrder::resolve(const Matrix& y) const {
  const std::size_t l = y.cols();
  Permutation p(l);
  std::iota(p.begin(), p.end(), std::size_t{0});
  switch (kind) {
    case Kind::given: break;
    case Kind::reversed: std::reverse(p.begin(), p.end()); break;
    case Kind::entropy: p = entropy_label_order(y); break;
    case Kind::explicit_order:
      check_permutation(permutation, l);
      p = permutation;
      break;
  }
  return p;
}

void FitConfig::validate() const {
  loss_spec.validate();
  optimizer.validate();
  if (loss_spec.probabilistic() && activation != Activation::sigmoid) {
    throw ValidationError("loss '" + std::string(to_string(loss_spec.kind)) +
                          "' needs probabilities; use the sigmoid activation");
  }
}

Matrix permute_columns(const Matrix& y, const Permutation& order) { return select_cols(y, order); }

Matrix unpermute_columns(const Matrix& y, const Permutation& order) {
  Matrix out(y.rows(), y.cols());
  for (std::size_t i = 0; i < y.rows(); ++i)
    for (std::size_t pos = 0; pos < order.size(); ++pos) out(i, order[pos]) = y(i, pos);
  return out;
}

Matrix FittedModel::predict_proba(const Matrix& x) const {
  if (x.cols() != params.n_features()) {
    throw ValidationError("model expects " + std::to_string(params.n_features()) +
                          " features, X has " + std::to_string(x.cols()));
  }
  return unpermute_columns(forward(params, x, activation, propagation).p, label_order);
}

Matrix FittedModel::predict(const Matrix& x) const { return threshold(predict_proba(x), activation); }

OptimizerResult fit_single_label(const Matrix& x, std::span<const double> y, const LossSpec& spec,
                                 Activation activation, const OptimizerConfig& optimizer) {
  const Matrix target = Matrix::from_data(y.size(), 1, Vector(y.begin(), y.end()));
  const Objective f = model_objective(x, target, spec, activation, 1, Dependencies::free);
  return minimize(f, Vector(ModelParams::flat_size(1, x.cols()), 0.0), optimizer);
}

ModelParams random_init(Rng& rng, std::size_t n_labels, std::size_t n_features) {
  Vector flat(ModelParams::flat_size(n_labels, n_features));
  for (double& v : flat) v = rng.uniform(-0.5, 0.5);
  return ModelParams::from_flat(flat, n_labels, n_features);
}

Permutation entropy_label_order(const Matrix& y) {
  check_binary(y);
  const std::size_t l = y.cols();
  Vector h(l, 0.0);
  for (std::size_t j = 0; j < l; ++j) {
    double pos = 0.0;
    for (std::size_t i = 0; i < y.rows(); ++i) pos += y(i, j);
    // Evaluate on min(p, 1 - p) so p and 1 - p give bit-identical entropies.
    const double p = y.rows() ? std::min(pos, y.rows() - pos) / y.rows() : 0.0;
    if (p > 0.0) h[j] = -p * std::log(p) - (1.0 - p) * std::log1p(-p);
  }
  Permutation order(l);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return h[a] < h[b]; });
  return order;
}

ModelParams informed_init(const Dataset& data, const FitConfig& config) {
  return fit_cc(data, config, Propagation::probability).params;
}

FittedModel fit_cc(const Dataset& data, const FitConfig& config, Propagation propagation) {
  config.validate();
  check_fit_data(data);
  FittedModel model;
  model.label_order = config.label_order.resolve(data.Y);
  const Matrix y = permute_columns(data.Y, model.label_order);
  ChainFit chain = fit_chain(data.X, y, config, propagation);
  model.params = std::move(chain.params);
  model.activation = config.activation;
  model.propagation = propagation;
  model.loss_spec = config.loss_spec;
  model.training_loss = chain.mean_stage_loss;
  model.n_starts_used = 1;
  model.degenerate_label_warning = config.loss_spec.lambda == 0.0 && has_constant_label(y);
  return model;
}

FittedModel fit_br(const Dataset& data, const FitConfig& config) {
  config.validate();
  check_fit_data(data);
  FittedModel model;
  model.label_order = config.label_order.resolve(data.Y);
  const Matrix y = permute_columns(data.Y, model.label_order);
  const std::size_t l = y.cols(), m = data.m();
  model.params = ModelParams::zeros(l, m);
  for (std::size_t k = 0; k < l; ++k) {
    OptimizerResult r;
    try {
      r = fit_single_label(data.X, y.col(k), config.loss_spec, config.activation, config.optimizer);
    } catch (const NumericalError& e) {
      throw FitError("label " + std::to_string(model.label_order[k]) + " failed: " + e.what());
    }
    model.params.b[k] = r.x[0];
    for (std::size_t j = 0; j < m; ++j) model.params.W(k, j) = r.x[1 + j];
    model.training_loss += r.f / static_cast<double>(l);
  }
  model.activation = config.activation;
  model.propagation = Propagation::probability;
  model.loss_spec = config.loss_spec;
  model.n_starts_used = 1;
  model.degenerate_label_warning = config.loss_spec.lambda == 0.0 && has_constant_label(y);
  return model;
}

FittedModel fit_ccn(const Dataset& data, const FitConfig& config) {
  config.validate();
  check_fit_data(data);
  FittedModel model;
  model.label_order = config.label_order.resolve(data.Y);
  const Matrix y = permute_columns(data.Y, model.label_order);
  const std::size_t l = y.cols(), m = data.m();
  const Dependencies deps = config.dependencies;

  std::vector<Vector> starts;
  if (config.use_informed_init && config.loss_spec.probabilistic()) {
    starts.push_back(fit_chain(data.X, y, config, Propagation::probability).params.to_flat(deps));
  }
  Rng rng(config.seed);
  for (std::size_t s = 0; s < config.n_random_starts; ++s) {
    starts.push_back(random_init(rng, l, m).to_flat(deps));
  }
  if (starts.empty()) starts.emplace_back(ModelParams::flat_size(l, m, deps), 0.0);

  const Objective objective = model_objective(data.X, y, config.loss_spec, config.activation, l, deps);
  bool found = false;
  OptimizerResult best;
  std::string last_error;
  for (Vector& start : starts) {
    try {
      OptimizerResult r = minimize(objective, std::move(start), config.optimizer);
      ++model.n_starts_used;
      if (!found || r.f < best.f) {
        best = std::move(r);
        found = true;
      }
    } catch (const NumericalError& e) {
      last_error = e.what();
    }
  }
  if (!found) throw FitError("all " + std::to_string(starts.size()) + " starts failed: " + last_error);

  model.params = ModelParams::from_flat(best.x, l, m, deps);
  model.activation = config.activation;
  model.propagation = Propagation::probability;
  model.loss_spec = config.loss_spec;
  model.training_loss = best.f;
  model.degenerate_label_warning = config.loss_spec.lambda == 0.0 && has_constant_label(y);
  return model;
}

}  // namespace ccn
