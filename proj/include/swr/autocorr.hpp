#pragma once

#include <cstdint>
#include <vector>

namespace swr {

// Zero-mean autoregressive error model e_t = phi_1 e_{t-1} + ... + phi_m e_{t-m} + eta_t.
struct ArModel {
  int order = 0;
  std::vector<double> phi;
  double innovation_sd = 0.0;
};

struct DwResult {
  double statistic = 0.0;
  double p_value = 0.0;
};

/**
 * Durbin-Watson statistic d = sum (e_t - e_{t-1})^2 / sum e_t^2 with a
 * one-sided permutation p-value for positive autocorrelation: the residuals
 * are shuffled n_boot times and p is the fraction of permutations with a
 * statistic at most the observed one. Deterministic for a fixed seed.
 *
 * Needs >= 3 residuals that are not all zero.
 */
DwResult durbin_watson(const std::vector<double>& residuals, int n_boot = 1000,
                       std::uint64_t seed = 0);

/**
 * Yule-Walker AR(m) fit from raw (uncentered) autocovariances via
 * Levinson-Durbin. Residuals of a well-specified model are treated as
 * zero-mean, so no centering is applied. Throws std::runtime_error when the
 * fitted polynomial has a characteristic root on or near the unit circle
 * (non-stationary), naming the offending root modulus.
 */
ArModel fit_ar(const std::vector<double>& residuals, int order);

// Quasi-differencing z~_t = z_t - sum_j phi_j z_{t-j}; drops the first
// `order` points, so the result has length n - order.
std::vector<double> cochrane_orcutt_transform(const std::vector<double>& z,
                                              const ArModel& ar);

}  // namespace swr
