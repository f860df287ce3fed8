#include "swr/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace swr {

namespace {

double normal_cdf(double z) { return 0.5 * (1.0 + std::erf(z / std::sqrt(2.0))); }

}  // namespace

double WindowKernel::weight_at(int lag) const {
  if (lag < s_min || lag > s_max) return 0.0;
  return weights[static_cast<std::size_t>(lag - s_min)];
}

int WindowKernel::mode_lag() const {
  const auto it = std::max_element(weights.begin(), weights.end());
  return s_min + static_cast<int>(it - weights.begin());
}

std::vector<double> WindowKernel::dense(std::size_t size) const {
  const std::size_t need = static_cast<std::size_t>(s_max) + 1;
  std::vector<double> out(std::max(size, need), 0.0);
  for (std::size_t j = 0; j < weights.size(); ++j) {
    out[static_cast<std::size_t>(s_min) + j] = weights[j];
  }
  return out;
}

WindowKernel build_kernel(const WindowParams& params) {
  const double delta = params.delta;
  const double sigma = params.sigma;
  if (!std::isfinite(delta) || !std::isfinite(sigma)) {
    throw std::invalid_argument("build_kernel: delta and sigma must be finite");
  }
  if (delta < 0.0 || sigma < 0.0) {
    throw std::invalid_argument("build_kernel: delta and sigma must be non-negative");
  }

  WindowKernel k;
  k.params = params;

  if (sigma == 0.0) {
    // Point mass at the nearest integer lag; x.5 resolves to the smaller lag.
    const int lag = static_cast<int>(std::ceil(delta - 0.5));
    k.s_min = lag;
    k.s_max = lag;
    k.tau = 0;
    k.weights = {1.0};
    return k;
  }

  const int lo = static_cast<int>(std::floor(delta - 3.0 * sigma));
  const int hi = static_cast<int>(std::ceil(delta + 3.0 * sigma));
  k.tau = lo < 0 ? -lo : 0;
  k.s_min = std::max(0, lo);
  k.s_max = hi;

  k.weights.resize(static_cast<std::size_t>(k.s_max - k.s_min) + 1);
  double total = 0.0;
  for (int s = k.s_min; s <= k.s_max; ++s) {
    const double mass = normal_cdf((s + 0.5 - delta) / sigma) -
                        normal_cdf((s - 0.5 - delta) / sigma);
    k.weights[static_cast<std::size_t>(s - k.s_min)] = mass;
    total += mass;
  }
  if (!(total > 0.0)) {
    throw std::runtime_error("build_kernel: kernel mass vanished");
  }
  for (double& w : k.weights) w /= total;
  return k;
}

WindowKernel build_kernel(double delta, double sigma) {
  return build_kernel(WindowParams{delta, sigma});
}

std::vector<double> combine_kernels(const std::vector<WindowKernel>& kernels,
                                    const std::vector<double>& betas,
                                    bool normalize) {
  if (kernels.empty() || kernels.size() != betas.size()) {
    throw std::invalid_argument(
        "combine_kernels: kernels and betas must be non-empty and equal length");
  }
  int max_lag = 0;
  for (const auto& k : kernels) max_lag = std::max(max_lag, k.s_max);

  std::vector<double> combined(static_cast<std::size_t>(max_lag) + 1, 0.0);
  for (std::size_t i = 0; i < kernels.size(); ++i) {
    if (!(betas[i] >= 0.0)) {
      throw std::invalid_argument("combine_kernels: betas must be non-negative, got " +
                                  std::to_string(betas[i]));
    }
    const auto& k = kernels[i];
    for (std::size_t j = 0; j < k.weights.size(); ++j) {
      combined[static_cast<std::size_t>(k.s_min) + j] += betas[i] * k.weights[j];
    }
  }
  if (normalize) {
    double total = 0.0;
    for (double w : combined) total += w;
    if (!(total > 0.0)) {
      throw std::invalid_argument("combine_kernels: zero total mass, cannot normalize");
    }
    for (double& w : combined) w /= total;
  }
  return combined;
}

}  // namespace swr
