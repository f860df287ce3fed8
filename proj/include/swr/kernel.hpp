#pragma once

#include <cstddef>
#include <vector>

namespace swr {

// Location (delta) and width (sigma) of one lag window, in time steps.
struct WindowParams {
  double delta = 0.0;
  double sigma = 0.0;
};

/**
 * Discretized Gaussian weight vector over integer time lags.
 *
 * The window covers lags [s_min, s_max] with s_min = max(0, floor(delta -
 * 3*sigma)) and s_max = ceil(delta + 3*sigma). Lags that would fall below 0
 * (future observations) are cut off; `tau` counts how many were removed.
 * Weights are non-negative and sum to 1.
 */
struct WindowKernel {
  WindowParams params;
  int s_min = 0;
  int s_max = 0;
  int tau = 0;
  std::vector<double> weights;  // weights[j] belongs to lag s_min + j

  double weight_at(int lag) const;
  // Lag carrying the largest weight (smallest such lag on ties).
  int mode_lag() const;
  // Embeds the kernel into a dense vector indexed by lag 0..size-1.
  // size 0 means "just large enough" (s_max + 1).
  std::vector<double> dense(std::size_t size = 0) const;
};

// Builds the discretized (possibly truncated) Gaussian kernel for the given
// parameters. sigma == 0 collapses to a unit point mass at the integer lag
// nearest delta (half-way ties go to the smaller lag). Throws
// std::invalid_argument on negative or non-finite inputs.
WindowKernel build_kernel(const WindowParams& params);
WindowKernel build_kernel(double delta, double sigma);

// Weighted sum of kernels embedded over lags 0..max(s_max). With `normalize`
// the result is divided by its L1 norm (the form used for overlap scores).
// Throws on empty input, negative betas, or zero total mass when normalizing.
std::vector<double> combine_kernels(const std::vector<WindowKernel>& kernels,
                                    const std::vector<double>& betas,
                                    bool normalize);

}  // namespace swr
