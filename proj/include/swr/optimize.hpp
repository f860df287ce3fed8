#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace swr {

/**
 * Bound-constrained minimization problem for a derivative-free local search.
 *
 * Bounds default to [0, +inf) per coordinate, which is the parameter space of
 * the regression model (weights, lags, widths are all non-negative). The
 * objective must be deterministic; the solver never evaluates outside the
 * bounds.
 */
struct OptProblem {
  std::size_t dim = 0;
  std::function<double(const std::vector<double>&)> objective;
  std::vector<double> lower_bounds;  // empty -> all 0
  std::vector<double> upper_bounds;  // empty -> all +inf
  double ftol_abs = 1e-8;
  long max_evals = 0;  // 0 -> 5000 * dim
};

struct MinimizeResult {
  std::vector<double> x;
  double f = 0.0;
  long n_evals = 0;
  bool converged = false;
};

/**
 * Nelder-Mead simplex search with dimension-adaptive coefficients, restarted
 * at progressively smaller scales around the incumbent until the best value
 * stops improving by more than ftol_abs (or the evaluation budget runs out).
 *
 * Trial points are clipped to the box before every evaluation, so the
 * returned point is always feasible; the result is the best point seen over
 * all evaluations, hence f <= f(x0). Fully deterministic.
 *
 * Throws std::invalid_argument for dim == 0, inconsistent bounds, or an
 * objective that is non-finite at the (clipped) starting point.
 */
MinimizeResult minimize(const OptProblem& problem, std::vector<double> x0);

}  // namespace swr
