#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ccnkit/dataset.hpp"
#include "ccnkit/error.hpp"
#include "ccnkit/model.hpp"
#include "ccnkit/optimizer.hpp"
#include "ccnkit/rng.hpp"

namespace ccn {

/// Every start (or stage) of a fit failed numerically.
class FitError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

using Permutation = std::vector<std::size_t>;

/// Chain order. `permutation[pos]` is the original index of the label placed
/// at chain position `pos`.
struct LabelOrder {
  enum class Kind { given, entropy, reversed, explicit_order };
  Kind kind = Kind::given;
  Permutation permutation;

  static LabelOrder given() { return {}; }
  static LabelOrder entropy() { return {Kind::entropy, {}}; }
  static LabelOrder reversed() { return {Kind::reversed, {}}; }
  static LabelOrder explicit_order(Permutation p) { return {Kind::explicit_order, std::move(p)}; }

  Permutation resolve(const Matrix& y) const;
};

/// Inputs a binary-propagation chain is trained on: the observed preceding
/// labels, or the chain's own thresholded in-sample predictions.
enum class ChainInputs { truth, predicted };

struct FitConfig {
  LossSpec loss_spec;
  Activation activation = Activation::sigmoid;
  std::size_t n_random_starts = 10;
  bool use_informed_init = true;
  std::uint64_t seed = 0;
  OptimizerConfig optimizer;
  LabelOrder label_order;
  Dependencies dependencies = Dependencies::free;
  ChainInputs chain_inputs = ChainInputs::truth;

  void validate() const;
};

struct FittedModel {
  ModelParams params;  ///< in chain order
  Permutation label_order;
  Activation activation = Activation::sigmoid;
  Propagation propagation = Propagation::probability;
  LossSpec loss_spec;
  double training_loss = 0.0;
  std::size_t n_starts_used = 0;
  /// Set when lambda is 0 and some label is constant, so the fit diverges
  /// along that label's bias until the optimizer tolerance stops it.
  bool degenerate_label_warning = false;

  /// Activations with columns in the original label indexing.
  Matrix predict_proba(const Matrix& x) const;
  /// Hard labels with columns in the original label indexing.
  Matrix predict(const Matrix& x) const;
};

FittedModel fit_ccn(const Dataset& data, const FitConfig& config);
/// Independent single-label fits; C is zero and each label's ridge count r is m.
FittedModel fit_br(const Dataset& data, const FitConfig& config);
FittedModel fit_cc(const Dataset& data, const FitConfig& config, Propagation propagation);

/// Probability-mode chain estimates in (b, W, C) form, in chain order.
ModelParams informed_init(const Dataset& data, const FitConfig& config);
/// b, W and the lower triangle of C drawn i.i.d. uniform on [-0.5, 0.5] in flat order.
ModelParams random_init(Rng& rng, std::size_t n_labels, std::size_t n_features);
/// Labels sorted by ascending marginal entropy, ties by index.
Permutation entropy_label_order(const Matrix& y);

/// Penalized single-label model on features x, minimized from zero.
/// Returns the optimizer result in ModelParams flat layout (L = 1).
OptimizerResult fit_single_label(const Matrix& x, std::span<const double> y, const LossSpec& spec,
                                 Activation activation, const OptimizerConfig& optimizer);

/// Columns of y reordered so column pos holds original label order[pos].
Matrix permute_columns(const Matrix& y, const Permutation& order);
/// Inverse of permute_columns.
Matrix unpermute_columns(const Matrix& y, const Permutation& order);

}  // namespace ccn
