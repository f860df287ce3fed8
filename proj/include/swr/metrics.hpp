#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace swr {

struct EvalScores {
  double rmse = 0.0;
  double r2 = 0.0;
  double kge = 0.0;
  std::size_t n_points = 0;
};

// Coefficient of determination, 1 - SSE / SST (Nash-Sutcliffe efficiency).
// Requires >= 2 points and a non-constant observed series.
double r2(std::span<const double> observed, std::span<const double> predicted);

// Kling-Gupta efficiency,
//   1 - sqrt((r-1)^2 + (sd_pred/sd_obs - 1)^2 + (mean_pred/mean_obs - 1)^2).
// Undefined for zero observed mean/SD or a constant prediction.
double kge(std::span<const double> observed, std::span<const double> predicted);

double rmse(std::span<const double> observed, std::span<const double> predicted);

EvalScores evaluate(std::span<const double> observed, std::span<const double> predicted);

// Overlap of two normalized non-negative lag-weight vectors: the sum of
// element-wise minima, in [0, 1], equal to 1 only for identical vectors.
// The shorter vector is zero-padded. Inputs must each sum to 1 within 1e-9.
double kernel_overlap(std::span<const double> w1, std::span<const double> w2);

// Largest R^2 any predictor can reach when iid noise with relative level
// alpha was added to the signal: 1 - alpha^2 / (1 + alpha^2).
double max_r2_iid(double alpha);

// AR(1)-noise counterpart: 1 / (1 + xi * alpha^2) with the variance
// inflation xi = (1 - phi^(2(t-1))) / (1 - phi^2) for a length-t series.
double max_r2_ar1(double alpha, double phi, std::size_t t);

}  // namespace swr
