#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "swr/kernel.hpp"

namespace swr {

/**
 * Multi-window regression model: the target at time t is a non-negative
 * combination of window-kernel convolutions of the input history,
 *
 *   y_t = [intercept +] sum_i beta_i * sum_s kappa_i(s) * x_{t-s} + eps_t.
 *
 * Windows are kept sorted by ascending location; equal locations are
 * rejected because they make the parameters unidentifiable.
 */
struct SwrModel {
  std::vector<WindowKernel> windows;
  std::vector<double> betas;
  std::optional<double> intercept;  // absent by default
  double error_sd = 0.0;

  std::size_t window_count() const { return windows.size(); }
  // Largest lag any window reaches; predictions start at this index.
  int max_lag() const;
};

// Validating constructor. Throws std::invalid_argument when k < 1, sizes
// mismatch, betas are negative, error_sd is negative, or window locations
// are not strictly increasing.
SwrModel make_model(std::vector<WindowKernel> windows, std::vector<double> betas,
                    std::optional<double> intercept = std::nullopt,
                    double error_sd = 0.0);

// Aligned input/target series on a common 0-based integer time axis.
struct TimeSeriesPair {
  std::vector<double> x;
  std::vector<double> y;
};

// Throws std::invalid_argument on length mismatch or non-finite entries.
void validate_pair(const TimeSeriesPair& data);

struct Prediction {
  std::vector<double> values;  // quiet NaN before first_valid
  std::size_t first_valid = 0;

  std::size_t valid_count() const { return values.size() - first_valid; }
  bool is_valid(std::size_t t) const { return t >= first_valid; }
};

// Evaluates the model over the input series. Time points earlier than the
// largest window lag cannot be predicted and are masked out. Throws when the
// series has no predictable point at all.
Prediction predict(const SwrModel& model, const std::vector<double>& x);

// y_t - yhat_t over the predictable range (length n - first_valid).
std::vector<double> residuals(const SwrModel& model, const TimeSeriesPair& data);

struct FitStats {
  double log_lik = 0.0;
  double aic = 0.0;
  double bic = 0.0;
  std::size_t n_valid = 0;
  double sse = 0.0;
};

// Gaussian log-likelihood with the error variance profiled at its maximum
// sigma^2 = SSE/n. A perfect fit (SSE == 0) is capped by flooring the
// variance at `variance_floor` so criteria stay finite and comparable.
double log_likelihood(const SwrModel& model, const TimeSeriesPair& data,
                      double variance_floor = 1e-12);

// Information criteria with 3 parameters per window (beta, delta, sigma);
// an enabled intercept counts as one more. The sample size is the number of
// predictable time points entering the likelihood.
double aic(const SwrModel& model, const TimeSeriesPair& data);
double bic(const SwrModel& model, const TimeSeriesPair& data);

// One-pass computation of the quantities above. `min_start` restricts the
// fitted range to t >= min_start (on top of the model's own warm-up); fits
// of different models are only comparable when evaluated over one range.
FitStats fit_stats(const SwrModel& model, const TimeSeriesPair& data,
                   double variance_floor = 1e-12, std::size_t min_start = 0);

}  // namespace swr
