#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>

#include "ccnkit/matrix.hpp"

namespace ccn {

enum class Activation { sigmoid, identity };
enum class LossKind { bce, focal, asymmetric, huber_hinge };

/// How a label's output enters the linear predictors of later labels:
/// continuous predictions, or their thresholded 0/1 version.
enum class Propagation { probability, binary };

/// Whether the dependency matrix C is estimated or held at zero. Frozen C
/// drops out of the penalty count r as well.
enum class Dependencies { free, frozen };

std::string_view to_string(Activation a);
std::string_view to_string(LossKind k);
std::string_view to_string(Propagation p);
Activation parse_activation(std::string_view s);
LossKind parse_loss_kind(std::string_view s);
Propagation parse_propagation(std::string_view s);

/// Probabilities are clipped into [kProbClip, 1 - kProbClip] before any log.
inline constexpr double kProbClip = 1e-12;

struct LossSpec {
  LossKind kind = LossKind::bce;
  double xi_plus = 0.0;   ///< focusing exponent for positive labels
  double xi_minus = 0.0;  ///< focusing exponent for negative labels (asymmetric only)
  double kappa = 0.0;     ///< Huber hinge smoothing, > -1
  double q = 1.0;         ///< aggregation exponent, >= 1
  double lambda = 0.0;    ///< ridge strength, >= 0

  bool probabilistic() const noexcept { return kind != LossKind::huber_hinge; }
  /// Activation the loss is defined on.
  Activation natural_activation() const noexcept {
    return probabilistic() ? Activation::sigmoid : Activation::identity;
  }
  void validate() const;
};

/// Bias b (L), weights W (L x m), strictly lower-triangular dependencies C (L x L).
/// C(k, l) with k > l is the effect of label l's output on label k.
struct ModelParams {
  Vector b;
  Matrix W;
  Matrix C;

  static ModelParams zeros(std::size_t n_labels, std::size_t n_features);

  std::size_t n_labels() const noexcept { return b.size(); }
  std::size_t n_features() const noexcept { return W.cols(); }
  void validate() const;

  /// Flat layout: b, then W row-major, then C's lower triangle row by row
  /// (C(1,0), C(2,0), C(2,1), ...). Frozen dependencies omit the C block.
  static std::size_t flat_size(std::size_t n_labels, std::size_t n_features,
                               Dependencies deps = Dependencies::free);
  Vector to_flat(Dependencies deps = Dependencies::free) const;
  static ModelParams from_flat(std::span<const double> flat, std::size_t n_labels,
                               std::size_t n_features, Dependencies deps = Dependencies::free);

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// Number of penalized entries r: all of W plus the free triangle of C.
std::size_t penalty_count(std::size_t n_labels, std::size_t n_features,
                          Dependencies deps = Dependencies::free);

struct ForwardCache {
  Matrix theta;  ///< n x L linear predictors
  Matrix p;      ///< n x L activations
};

ForwardCache forward(const ModelParams& params, const Matrix& x, Activation activation,
                     Propagation propagation = Propagation::probability);

/// Hard label for one activation: sigmoid output >= 0.5, identity output >= 0.
inline double threshold(double p, Activation activation) {
  return p >= (activation == Activation::sigmoid ? 0.5 : 0.0) ? 1.0 : 0.0;
}
Matrix threshold(const Matrix& p, Activation activation);

Matrix predict(const ModelParams& params, const Matrix& x, Activation activation,
               Propagation propagation = Propagation::probability);

/// Nonnegative per-label loss h for label y at prediction p.
double per_label_loss(const LossSpec& spec, int y, double p);
/// dh/dp, evaluated at the clipped p for probabilistic kinds.
double per_label_loss_derivative(const LossSpec& spec, int y, double p);

struct Gradient {
  Vector b;
  Matrix W;
  Matrix C;

  Vector to_flat(Dependencies deps = Dependencies::free) const;
};

/// Penalized l_q-aggregated loss
///   1/(n L^{1/q}) sum_i (sum_l h_il^q)^{1/q} + lambda/r (||W||^2 + ||C||^2).
double loss(const ModelParams& params, const Matrix& x, const Matrix& y, const LossSpec& spec,
            Activation activation, Dependencies deps = Dependencies::free);

Gradient gradient(const ModelParams& params, const Matrix& x, const Matrix& y,
                  const LossSpec& spec, Activation activation,
                  Dependencies deps = Dependencies::free);

/// Loss and gradient from a single forward/backward sweep.
double loss_and_gradient(const ModelParams& params, const Matrix& x, const Matrix& y,
                         const LossSpec& spec, Activation activation, Gradient& grad,
                         Dependencies deps = Dependencies::free);

}  // namespace ccn
