#include "ccnkit/simgen.hpp"

#include <algorithm>
#include <cmath>

#include "ccnkit/error.hpp"
#include "ccnkit/linalg.hpp"

namespace ccn {

namespace {

Matrix design_sigma() {
  return Matrix::from_rows({{2.0, 0.4, 0.4}, {0.4, 2.0, 0.4}, {0.4, 0.4, 2.0}});
}

ModelParams make_params(const Vector& b, const Vector& w_first_col,
                        std::initializer_list<std::initializer_list<double>> c_lower_rows) {
  ModelParams p = ModelParams::zeros(b.size(), 3);
  p.b = b;
  for (std::size_t k = 0; k < b.size(); ++k) p.W(k, 0) = w_first_col[k];
  std::size_t k = 1;
  for (const auto& row : c_lower_rows) {
    std::size_t j = 0;
    for (double v : row) p.C(k, j++) = v;
    ++k;
  }
  return p;
}

ModelParams strong_params() {
  return make_params({1.0, 3.0, 0.5}, {2.0, 1.0, -0.5}, {{-6.0}, {2.0, -4.0}});
}

ModelParams weak_params() {
  return make_params({1.0, -2.5, -0.5}, {2.0, 2.0, -3.0}, {{1.0}, {2.5, -3.0}});
}

ModelParams six_label_params() {
  return make_params({1.0, 3.0, 0.5, 0.0, 0.0, 0.0}, {2.0, 1.0, -0.5, -1.0, -3.0, 1.0},
                     {{-4.0},
                      {-1.0, 0.0},
                      {4.0, -2.0, -2.0},
                      {0.0, -2.0, -6.0, 6.0},
                      {0.0, 0.0, 6.0, 0.0, -6.0}});
}

// Block-diagonal stack: labels of `a` first, cross-block C entries zero.
ModelParams stack_params(const ModelParams& a, const ModelParams& b) {
  const std::size_t la = a.n_labels(), lb = b.n_labels();
  ModelParams p = ModelParams::zeros(la + lb, a.n_features());
  for (std::size_t k = 0; k < la; ++k) {
    p.b[k] = a.b[k];
    for (std::size_t j = 0; j < a.n_features(); ++j) p.W(k, j) = a.W(k, j);
    for (std::size_t j = 0; j < k; ++j) p.C(k, j) = a.C(k, j);
  }
  for (std::size_t k = 0; k < lb; ++k) {
    p.b[la + k] = b.b[k];
    for (std::size_t j = 0; j < b.n_features(); ++j) p.W(la + k, j) = b.W(k, j);
    for (std::size_t j = 0; j < k; ++j) p.C(la + k, la + j) = b.C(k, j);
  }
  return p;
}

double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

}  // namespace

std::string_view to_string(Realization r) {
  return r == Realization::probabilistic ? "probabilistic" : "sequential";
}

std::string_view to_string(PostTransform t) {
  return t == PostTransform::none ? "none" : "reverse-labels";
}

std::size_t SimDesign::parameter_count() const {
  const std::size_t l = n_labels(), m = n_features();
  return l * (m + 1) + l * (l - 1) / 2;
}

void SimDesign::validate() const {
  params.validate();
  if (sigma.rows() != n_features() || sigma.cols() != n_features()) {
    throw ValidationError("design '" + name + "': sigma must be " + std::to_string(n_features()) +
                          "x" + std::to_string(n_features()));
  }
}

const std::vector<std::string>& builtin_design_names() {
  static const std::vector<std::string> names{"strong",   "weak",       "six-label",
                                              "reversed", "sequential", "increased"};
  return names;
}

SimDesign builtin_design(std::string_view name) {
  SimDesign d;
  d.name = std::string(name);
  d.sigma = design_sigma();
  if (name == "strong") {
    d.params = strong_params();
  } else if (name == "weak") {
    d.params = weak_params();
  } else if (name == "six-label") {
    d.params = six_label_params();
  } else if (name == "reversed") {
    d.params = six_label_params();
    d.post_transform = PostTransform::reverse_labels;
  } else if (name == "sequential") {
    d.params = six_label_params();
    d.realization = Realization::sequential;
  } else if (name == "increased") {
    d.params = stack_params(strong_params(), six_label_params());
  } else {
    throw ValidationError("unknown design '" + std::string(name) + "'");
  }
  return d;
}

Simulation generate(const SimDesign& design, std::size_t n, Rng& rng) {
  design.validate();
  const std::size_t l = design.n_labels(), m = design.n_features();
  Simulation sim;
  sim.data.X = mvn_sample(rng, Vector(m, 0.0), cholesky(design.sigma), n);
  sim.data.Y = Matrix(n, l);
  sim.latent_p = Matrix(n, l);
  const ModelParams& par = design.params;

  if (design.realization == Realization::probabilistic) {
    sim.latent_p = forward(par, sim.data.X, Activation::sigmoid).p;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < l; ++k) sim.data.Y(i, k) = rng.bernoulli(sim.latent_p(i, k)) ? 1.0 : 0.0;
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      const auto x = sim.data.X.row(i);
      for (std::size_t k = 0; k < l; ++k) {
        double theta = par.b[k] + dot(par.W.row(k), x);
        for (std::size_t j = 0; j < k; ++j) theta += par.C(k, j) * sim.data.Y(i, j);
        const double p = sigmoid(theta);
        sim.latent_p(i, k) = p;
        sim.data.Y(i, k) = rng.bernoulli(p) ? 1.0 : 0.0;
      }
    }
  }

  if (design.post_transform == PostTransform::reverse_labels) {
    std::vector<std::size_t> rev(l);
    for (std::size_t k = 0; k < l; ++k) rev[k] = l - 1 - k;
    sim.data.Y = select_cols(sim.data.Y, rev);
    sim.latent_p = select_cols(sim.latent_p, rev);
  }
  return sim;
}

void RandomDgpSpec::validate() const {
  if (n_labels == 0) throw ValidationError("random DGP needs at least one label");
  if (!(param_sd > 0.0)) throw ValidationError("param_sd must be positive");
  if (!(imbalance_cap > 0.5 && imbalance_cap <= 1.0)) throw ValidationError("imbalance_cap must lie in (0.5, 1]");
  if (probe_draws == 0 || max_attempts == 0) throw ValidationError("probe_draws and max_attempts must be positive");
}

SimDesign random_dgp(const RandomDgpSpec& spec, Rng& rng) {
  spec.validate();
  const std::size_t l = spec.n_labels;
  for (std::size_t attempt = 0; attempt < spec.max_attempts; ++attempt) {
    SimDesign d;
    d.name = "random_dgp";
    d.sigma = design_sigma();
    d.params = ModelParams::zeros(l, 3);
    for (std::size_t k = 0; k < l; ++k) d.params.b[k] = spec.param_sd * rng.normal();
    for (std::size_t k = 0; k < l; ++k) d.params.W(k, 0) = spec.param_sd * rng.normal();
    for (std::size_t k = 1; k < l; ++k)
      for (std::size_t j = 0; j < k; ++j) d.params.C(k, j) = spec.param_sd * rng.normal();

    const Simulation probe = generate(d, spec.probe_draws, rng);
    bool ok = true;
    for (std::size_t k = 0; k < l && ok; ++k) {
      double pos = 0.0;
      for (std::size_t i = 0; i < spec.probe_draws; ++i) pos += probe.data.Y(i, k);
      const double share = pos / static_cast<double>(spec.probe_draws);
      ok = std::max(share, 1.0 - share) <= spec.imbalance_cap;
    }
    if (ok) return d;
  }
  throw NumericalError("random DGP: no parameter draw met the imbalance cap in " +
                       std::to_string(spec.max_attempts) + " attempts");
}

}  // namespace ccn
