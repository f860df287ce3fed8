#include "swr/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace swr {

namespace {
constexpr double kTwoPi = 2.0 * 3.14159265358979323846;
}

int SwrModel::max_lag() const {
  int lag = 0;
  for (const auto& w : windows) lag = std::max(lag, w.s_max);
  return lag;
}

SwrModel make_model(std::vector<WindowKernel> windows, std::vector<double> betas,
                    std::optional<double> intercept, double error_sd) {
  if (windows.empty() || windows.size() != betas.size()) {
    throw std::invalid_argument("make_model: need k >= 1 windows with matching betas");
  }
  for (double b : betas) {
    if (!std::isfinite(b) || b < 0.0) {
      throw std::invalid_argument("make_model: betas must be finite and non-negative");
    }
  }
  if (!(error_sd >= 0.0)) {
    throw std::invalid_argument("make_model: error_sd must be non-negative");
  }
  if (intercept && !std::isfinite(*intercept)) {
    throw std::invalid_argument("make_model: intercept must be finite");
  }
  for (std::size_t i = 1; i < windows.size(); ++i) {
    if (!(windows[i - 1].params.delta < windows[i].params.delta)) {
      throw std::invalid_argument(
          "make_model: window locations must be strictly increasing (tie at delta=" +
          std::to_string(windows[i].params.delta) + ")");
    }
  }
  SwrModel m;
  m.windows = std::move(windows);
  m.betas = std::move(betas);
  m.intercept = intercept;
  m.error_sd = error_sd;
  return m;
}

void validate_pair(const TimeSeriesPair& data) {
  if (data.x.size() != data.y.size()) {
    throw std::invalid_argument("time series pair: x and y lengths differ");
  }
  for (std::size_t t = 0; t < data.x.size(); ++t) {
    if (!std::isfinite(data.x[t]) || !std::isfinite(data.y[t])) {
      throw std::invalid_argument("time series pair: non-finite entry at index " +
                                  std::to_string(t));
    }
  }
}

Prediction predict(const SwrModel& model, const std::vector<double>& x) {
  const int max_lag = model.max_lag();
  const std::size_t n = x.size();
  if (n <= static_cast<std::size_t>(max_lag)) {
    throw std::invalid_argument("predict: series of length " + std::to_string(n) +
                                " has no predictable point (needs > " +
                                std::to_string(max_lag) + ")");
  }

  // One dense pass over the combined beta-weighted kernel is equivalent to
  // summing the per-window convolutions.
  const std::vector<double> w = combine_kernels(model.windows, model.betas, false);
  const double c = model.intercept.value_or(0.0);

  Prediction pred;
  pred.first_valid = static_cast<std::size_t>(max_lag);
  pred.values.assign(n, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t t = pred.first_valid; t < n; ++t) {
    double acc = 0.0;
    for (std::size_t s = 0; s < w.size(); ++s) acc += w[s] * x[t - s];
    pred.values[t] = c + acc;
  }
  return pred;
}

std::vector<double> residuals(const SwrModel& model, const TimeSeriesPair& data) {
  validate_pair(data);
  const Prediction pred = predict(model, data.x);
  std::vector<double> e(data.y.size() - pred.first_valid);
  for (std::size_t t = pred.first_valid; t < data.y.size(); ++t) {
    e[t - pred.first_valid] = data.y[t] - pred.values[t];
  }
  return e;
}

FitStats fit_stats(const SwrModel& model, const TimeSeriesPair& data,
                   double variance_floor, std::size_t min_start) {
  validate_pair(data);
  const Prediction pred = predict(model, data.x);
  const std::size_t start = std::max(pred.first_valid, min_start);
  if (data.y.size() < start + 2) {
    throw std::invalid_argument("log_likelihood: needs at least 2 predictable points");
  }
  const double n = static_cast<double>(data.y.size() - start);
  double sse = 0.0;
  for (std::size_t t = start; t < data.y.size(); ++t) {
    const double v = data.y[t] - pred.values[t];
    sse += v * v;
  }

  const double var = std::max(sse / n, variance_floor);
  FitStats s;
  s.n_valid = data.y.size() - start;
  s.sse = sse;
  s.log_lik = -0.5 * n * (std::log(kTwoPi * var) + 1.0);

  const double k = static_cast<double>(model.window_count());
  const double extra = model.intercept ? 1.0 : 0.0;
  s.aic = -2.0 * s.log_lik + 2.0 * (3.0 * k + extra);
  s.bic = -2.0 * s.log_lik + std::log(n) * (3.0 * k + extra);
  return s;
}

double log_likelihood(const SwrModel& model, const TimeSeriesPair& data,
                      double variance_floor) {
  return fit_stats(model, data, variance_floor).log_lik;
}

double aic(const SwrModel& model, const TimeSeriesPair& data) {
  return fit_stats(model, data).aic;
}

double bic(const SwrModel& model, const TimeSeriesPair& data) {
  return fit_stats(model, data).bic;
}

}  // namespace swr
