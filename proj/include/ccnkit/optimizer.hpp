#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <utility>

#include "ccnkit/error.hpp"
#include "ccnkit/matrix.hpp"

namespace ccn {

/// Value at x; writes the gradient into `grad` (same length as x).
using Objective = std::function<double(std::span<const double> x, std::span<double> grad)>;

struct OptimizerConfig {
  double c1 = 1e-6;  ///< Armijo constant
  double c2 = 0.9;   ///< curvature constant
  double eps_c = 1e-6;  ///< relative decrease tolerance f_prev/f - 1
  /// Also stop when max|g| falls to this value. Keeps exact minima from
  /// dividing by a zero-length step.
  double grad_tol = 1e-12;
  std::size_t max_iters = 2000;
  std::size_t max_linesearch = 50;

  void validate() const;
};

enum class OptimizerStatus { converged, max_iters, linesearch_stalled };
std::string_view to_string(OptimizerStatus s);

struct OptimizerResult {
  Vector x;
  double f = 0.0;
  Vector grad;
  std::size_t iterations = 0;
  OptimizerStatus status = OptimizerStatus::converged;
  /// Objective after every accepted step, starting with f(x0).
  Vector trace;
  /// Final inverse-Hessian approximation.
  Matrix inverse_hessian;
};

/// Non-finite objective or gradient at the starting point. Carries the last
/// state that evaluated cleanly.
class OptimizerError : public NumericalError {
 public:
  OptimizerError(const std::string& what, Vector last_x, double last_f)
      : NumericalError(what), last_x_(std::move(last_x)), last_f_(last_f) {}
  const Vector& last_x() const noexcept { return last_x_; }
  double last_f() const noexcept { return last_f_; }

 private:
  Vector last_x_;
  double last_f_;
};

class LineSearchError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

struct LineSearchResult {
  double step = 0.0;
  double f = 0.0;
  Vector grad;  ///< gradient at x + step * d
  std::size_t evaluations = 0;
};

/// Step satisfying the strong Wolfe conditions along descent direction d,
/// found by bracketing from a unit trial step and cubic-interpolation zoom.
/// Throws ValidationError when g0.d >= 0 and LineSearchError when no step is
/// found within config.max_linesearch evaluations.
LineSearchResult wolfe_linesearch(const Objective& objective, std::span<const double> x,
                                  std::span<const double> d, double f0,
                                  std::span<const double> g0, const OptimizerConfig& config);

/// BFGS with identity initial inverse Hessian. Stops when
/// f_prev / f - 1 <= eps_c (|f_prev - f| <= eps_c once f <= 0), when the
/// gradient vanishes, after max_iters, or when the line search stalls.
OptimizerResult minimize(const Objective& objective, Vector x0, const OptimizerConfig& config = {});

}  // namespace ccn
