#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

#include "ccnkit/error.hpp"
#include "ccnkit/matrix.hpp"
#include "ccnkit/model.hpp"

namespace ccn {

enum class MetricKind { hamming, zero_one, nll, micro_f1, macro_f1 };

inline constexpr std::array<MetricKind, 5> kAllMetrics = {
    MetricKind::hamming, MetricKind::zero_one, MetricKind::nll, MetricKind::micro_f1,
    MetricKind::macro_f1};

std::string_view to_string(MetricKind k);
MetricKind parse_metric(std::string_view s);
constexpr bool lower_is_better(MetricKind k) {
  return k == MetricKind::hamming || k == MetricKind::zero_one || k == MetricKind::nll;
}
/// True when `a` is strictly better than `b` under k's direction.
constexpr bool better(MetricKind k, double a, double b) { return lower_is_better(k) ? a < b : a > b; }

double hamming(const Matrix& y, const Matrix& yhat);
double zero_one(const Matrix& y, const Matrix& yhat);
double micro_f1(const Matrix& y, const Matrix& yhat);
/// Mean per-label F1; a label with no positives in truth or prediction scores 1.
double macro_f1(const Matrix& y, const Matrix& yhat);
/// Mean binary cross-entropy with p clipped to [1e-12, 1 - 1e-12].
double nll(const Matrix& y, const Matrix& p);

/// Metric k from probabilities p; hard labels come from thresholding p.
double score(MetricKind k, const Matrix& y, const Matrix& p, Activation activation = Activation::sigmoid);

/// Fewer paired observations than a test needs.
class InsufficientDataError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

struct WilcoxonResult {
  double w_plus = 0.0;    ///< rank sum of positive differences a - b
  double z = 0.0;
  double p_value = 1.0;   ///< two-sided
  std::size_t n_used = 0; ///< nonzero differences
};

/// Paired two-sided signed-rank test, normal approximation with tie
/// correction; zero differences are dropped. Needs at least 10 nonzero
/// differences.
WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b);

/// Average ranks (1-based) with ties sharing their mean rank.
Vector average_ranks(std::span<const double> v);

struct SpearmanResult {
  double rho = 0.0;
  double p_value = 1.0;  ///< two-sided, Student t with n - 2 dof
};

/// Empty when fewer than 3 pairs or either side is constant.
std::optional<SpearmanResult> spearman(std::span<const double> a, std::span<const double> b);

}  // namespace ccn
