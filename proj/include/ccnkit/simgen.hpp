#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "ccnkit/dataset.hpp"
#include "ccnkit/model.hpp"
#include "ccnkit/rng.hpp"

namespace ccn {

/// probabilistic: successors see label probabilities. sequential: each label
/// is drawn before its successors, which then see the 0/1 outcome.
enum class Realization { probabilistic, sequential };
enum class PostTransform { none, reverse_labels };

std::string_view to_string(Realization r);
std::string_view to_string(PostTransform t);

struct SimDesign {
  std::string name;
  ModelParams params;
  Matrix sigma;
  Realization realization = Realization::probabilistic;
  PostTransform post_transform = PostTransform::none;
  std::size_t n = 200;

  std::size_t n_labels() const { return params.n_labels(); }
  std::size_t n_features() const { return params.n_features(); }
  /// Free parameters of a CCN fit: L(m + 1) + L(L - 1)/2.
  std::size_t parameter_count() const;
  void validate() const;
};

/// "strong", "weak", "six-label", "reversed", "sequential", "increased".
SimDesign builtin_design(std::string_view name);
const std::vector<std::string>& builtin_design_names();

struct Simulation {
  Dataset data;
  /// Label probabilities behind each Bernoulli draw, columns in output order.
  Matrix latent_p;
};

/// X ~ N(0, sigma) for n rows, then Bernoulli labels drawn row by row.
Simulation generate(const SimDesign& design, std::size_t n, Rng& rng);
inline Simulation generate(const SimDesign& design, Rng& rng) { return generate(design, design.n, rng); }

struct RandomDgpSpec {
  std::size_t n_labels = 6;
  double param_sd = 4.0;
  double imbalance_cap = 0.85;
  std::size_t probe_draws = 10000;
  std::size_t max_attempts = 1000;

  void validate() const;
};

/// Six-label-shaped design with b, the first column of W and the lower
/// triangle of C drawn from N(0, param_sd^2). Redraws until every label's
/// majority-class share over a probe sample is at most imbalance_cap.
SimDesign random_dgp(const RandomDgpSpec& spec, Rng& rng);

}  // namespace ccn
