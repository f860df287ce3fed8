#pragma once

#include <functional>
#include <string>
#include <vector>

#include "swr/model.hpp"

namespace swr {

/**
 * Observed-information summary at a fitted parameter vector: the numerical
 * Hessian of the negative log-likelihood and the standard errors from the
 * diagonal of its inverse. Entries that cannot be computed (parameter on the
 * boundary, singular information, negative variance estimate) are NaN and
 * flagged unavailable instead of failing the whole report.
 */
struct UncertaintyReport {
  std::vector<std::string> parameter_names;  // beta1..k, delta1..k, sigma1..k[, intercept]
  std::vector<double> values;
  std::vector<std::vector<double>> hessian;  // NaN rows/cols where unavailable
  std::vector<double> std_errors;            // NaN where unavailable
  std::vector<bool> available;
};

/**
 * Central finite-difference Hessian with per-coordinate steps
 * h_j = max(1e-5, 1e-5 * |theta_j|), symmetrized exactly. Coordinates whose
 * stencil would cross a lower bound are skipped and reported through
 * `available`; stencil points with non-finite objective values mark the
 * touched entries unavailable.
 */
std::vector<std::vector<double>> fd_hessian(
    const std::function<double(const std::vector<double>&)>& objective,
    const std::vector<double>& theta, const std::vector<double>& lower_bounds,
    std::vector<bool>* available = nullptr);

// Hessian of the model NLL at the model's own parameters, inverted for
// standard errors. The model should be at (or near) a local NLL minimum.
UncertaintyReport observed_information(const SwrModel& model, const TimeSeriesPair& data,
                                       double variance_floor = 1e-12);

}  // namespace swr
