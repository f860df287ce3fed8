#include "swr/metrics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace swr {

namespace {

void require_same_size(std::span<const double> a, std::span<const double> b,
                       const char* where) {
  if (a.size() != b.size()) {
    throw std::invalid_argument(std::string(where) + ": series lengths differ");
  }
}

double mean(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace

double r2(std::span<const double> observed, std::span<const double> predicted) {
  require_same_size(observed, predicted, "r2");
  if (observed.size() < 2) throw std::invalid_argument("r2: needs at least 2 points");
  const double y_bar = mean(observed);
  double sse = 0.0, sst = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double e = observed[i] - predicted[i];
    const double d = observed[i] - y_bar;
    sse += e * e;
    sst += d * d;
  }
  if (sst == 0.0) throw std::invalid_argument("r2: observed series is constant");
  return 1.0 - sse / sst;
}

double kge(std::span<const double> observed, std::span<const double> predicted) {
  require_same_size(observed, predicted, "kge");
  const std::size_t n = observed.size();
  if (n < 2) throw std::invalid_argument("kge: needs at least 2 points");

  const double mu_y = mean(observed);
  const double mu_p = mean(predicted);
  double var_y = 0.0, var_p = 0.0, cov = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dy = observed[i] - mu_y;
    const double dp = predicted[i] - mu_p;
    var_y += dy * dy;
    var_p += dp * dp;
    cov += dy * dp;
  }
  const double denom = static_cast<double>(n) - 1.0;
  var_y /= denom;
  var_p /= denom;
  cov /= denom;

  if (mu_y == 0.0) throw std::invalid_argument("kge: observed mean is zero");
  if (var_y == 0.0) throw std::invalid_argument("kge: observed series is constant");
  if (var_p == 0.0) {
    throw std::invalid_argument("kge: constant prediction, correlation undefined");
  }
  const double corr = cov / std::sqrt(var_y * var_p);
  const double sd_ratio = std::sqrt(var_p / var_y);
  const double mean_ratio = mu_p / mu_y;
  return 1.0 - std::sqrt((corr - 1.0) * (corr - 1.0) +
                         (sd_ratio - 1.0) * (sd_ratio - 1.0) +
                         (mean_ratio - 1.0) * (mean_ratio - 1.0));
}

double rmse(std::span<const double> observed, std::span<const double> predicted) {
  require_same_size(observed, predicted, "rmse");
  if (observed.empty()) throw std::invalid_argument("rmse: empty range");
  double sse = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double e = observed[i] - predicted[i];
    sse += e * e;
  }
  return std::sqrt(sse / static_cast<double>(observed.size()));
}

EvalScores evaluate(std::span<const double> observed, std::span<const double> predicted) {
  EvalScores s;
  s.rmse = rmse(observed, predicted);
  s.r2 = r2(observed, predicted);
  s.kge = kge(observed, predicted);
  s.n_points = observed.size();
  return s;
}

double kernel_overlap(std::span<const double> w1, std::span<const double> w2) {
  for (auto w : {w1, w2}) {
    double total = 0.0;
    for (double v : w) {
      if (v < 0.0) throw std::invalid_argument("kernel_overlap: negative weight");
      total += v;
    }
    if (std::abs(total - 1.0) > 1e-9) {
      throw std::invalid_argument("kernel_overlap: weights must sum to 1");
    }
  }
  const std::size_t n = std::min(w1.size(), w2.size());
  double overlap = 0.0;
  for (std::size_t i = 0; i < n; ++i) overlap += std::min(w1[i], w2[i]);
  return overlap;  // zero-padding adds nothing to the minima
}

double max_r2_iid(double alpha) {
  if (!(alpha >= 0.0)) throw std::invalid_argument("max_r2_iid: alpha must be >= 0");
  return 1.0 - alpha * alpha / (1.0 + alpha * alpha);
}

double max_r2_ar1(double alpha, double phi, std::size_t t) {
  if (!(alpha >= 0.0)) throw std::invalid_argument("max_r2_ar1: alpha must be >= 0");
  if (!(std::abs(phi) < 1.0)) {
    throw std::invalid_argument("max_r2_ar1: phi must lie in (-1, 1)");
  }
  if (t < 2) throw std::invalid_argument("max_r2_ar1: series length must be >= 2");
  const double xi = (1.0 - std::pow(phi, 2.0 * (static_cast<double>(t) - 1.0))) /
                    (1.0 - phi * phi);
  return 1.0 / (1.0 + xi * alpha * alpha);
}

}  // namespace swr
