#pragma once

// Internal: loss evaluation for a flat parameter vector
// [beta_1..k, delta_1..k, sigma_1..k, (intercept)], shared by the trainer and
// the observed-information code. Returns +inf for parameter points where the
// model cannot be evaluated (window reaching past the series start).

#include <cmath>
#include <limits>
#include <vector>

#include "swr/kernel.hpp"
#include "swr/model.hpp"

namespace swr::detail {

enum class LossKind { nll, rmse };

inline double loss_from_sse(LossKind loss, double sse, double n, double variance_floor) {
  if (loss == LossKind::rmse) return std::sqrt(sse / n);
  const double var = std::max(sse / n, variance_floor);
  constexpr double two_pi = 2.0 * 3.14159265358979323846;
  return 0.5 * n * (std::log(two_pi * var) + 1.0);  // negative log-likelihood
}

class ParamObjective {
 public:
  ParamObjective(const TimeSeriesPair& data, int k, bool intercept, LossKind loss,
                 double variance_floor)
      : data_(&data),
        k_(k),
        intercept_(intercept),
        loss_(loss),
        variance_floor_(variance_floor) {}

  double operator()(const std::vector<double>& theta) const {
    constexpr double inf = std::numeric_limits<double>::infinity();
    const std::size_t k = static_cast<std::size_t>(k_);
    const std::size_t n = data_->x.size();

    // cheap reject before building kernels: largest lag must leave >= 2
    // usable time points
    int max_lag = 0;
    for (std::size_t i = 0; i < k; ++i) {
      const double delta = theta[k + i];
      const double sigma = theta[2 * k + i];
      if (!std::isfinite(delta) || !std::isfinite(sigma)) return inf;
      const double hi = sigma > 0.0 ? std::ceil(delta + 3.0 * sigma)
                                    : std::ceil(delta - 0.5);
      if (hi > static_cast<double>(n) - 3.0) return inf;
      max_lag = std::max(max_lag, static_cast<int>(hi));
    }

    std::vector<double> w(static_cast<std::size_t>(max_lag) + 1, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
      const WindowKernel kern = build_kernel(theta[k + i], theta[2 * k + i]);
      for (std::size_t j = 0; j < kern.weights.size(); ++j) {
        w[static_cast<std::size_t>(kern.s_min) + j] += theta[i] * kern.weights[j];
      }
    }
    const double c = intercept_ ? theta[3 * k] : 0.0;

    const std::vector<double>& x = data_->x;
    const std::vector<double>& y = data_->y;
    double sse = 0.0;
    for (std::size_t t = static_cast<std::size_t>(max_lag); t < n; ++t) {
      double acc = c;
      for (std::size_t s = 0; s < w.size(); ++s) acc += w[s] * x[t - s];
      const double e = y[t] - acc;
      sse += e * e;
    }
    const double n_valid = static_cast<double>(n - static_cast<std::size_t>(max_lag));
    // Optimize the per-point loss scaled to the full series length. The
    // number of usable points shrinks as windows widen; the raw range-NLL
    // rewards dropping points whenever the fit is still poor, which opens a
    // degenerate descent path (grow sigma until almost nothing remains and
    // overfit the shreds). Comparing per-point keeps candidates with
    // different supports on one scale; reported likelihoods and criteria
    // are unaffected.
    const double per_point = loss_from_sse(loss_, sse, n_valid, variance_floor_) / n_valid;
    return per_point * static_cast<double>(n);
  }

 private:
  const TimeSeriesPair* data_;
  int k_;
  bool intercept_;
  LossKind loss_;
  double variance_floor_;
};

}  // namespace swr::detail
