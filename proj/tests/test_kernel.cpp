#include <doctest.h>

#include <cmath>
#include <cstring>
#include <limits>
#include <stdexcept>

#include "swr/kernel.hpp"
#include "swr/rng.hpp"

using swr::build_kernel;
using swr::combine_kernels;
using swr::WindowKernel;

namespace {

double weight_sum(const WindowKernel& k) {
  double s = 0.0;
  for (double w : k.weights) s += w;
  return s;
}

// non-increasing away from the mode, strict except for fp-level ties
bool unimodal(const WindowKernel& k) {
  const int mode = k.mode_lag();
  for (int s = mode; s < k.s_max; ++s) {
    if (k.weight_at(s + 1) > k.weight_at(s) + 1e-12) return false;
  }
  for (int s = mode; s > k.s_min; --s) {
    if (k.weight_at(s - 1) > k.weight_at(s) + 1e-12) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("truncated kernel: delta=3 sigma=2 covers lags 0..9 with tau=3") {
  const WindowKernel k = build_kernel(3.0, 2.0);
  CHECK(k.s_min == 0);
  CHECK(k.s_max == 9);
  CHECK(k.tau == 3);
  CHECK(weight_sum(k) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(k.mode_lag() == 3);
}

TEST_CASE("sigma=0 gives a point mass at the nearest lag") {
  const WindowKernel k = build_kernel(7.0, 0.0);
  CHECK(k.s_min == 7);
  CHECK(k.s_max == 7);
  REQUIRE(k.weights.size() == 1);
  CHECK(k.weights[0] == 1.0);

  // half-way ties resolve toward the smaller lag
  CHECK(build_kernel(2.5, 0.0).s_min == 2);
  CHECK(build_kernel(2.4, 0.0).s_min == 2);
  CHECK(build_kernel(2.6, 0.0).s_min == 3);
  CHECK(build_kernel(0.0, 0.0).s_min == 0);
}

TEST_CASE("untruncated integer-centered kernel is symmetric") {
  const WindowKernel k = build_kernel(10.0, 1.0);
  CHECK(k.s_min == 7);
  CHECK(k.s_max == 13);
  for (int j = 1; j <= 3; ++j) {
    CHECK(k.weight_at(10 - j) == doctest::Approx(k.weight_at(10 + j)).epsilon(1e-12));
  }
  CHECK(k.mode_lag() == 10);
}

TEST_CASE("delta=0 keeps the decreasing half of the bell") {
  const WindowKernel k = build_kernel(0.0, 2.0);
  CHECK(k.s_min == 0);
  CHECK(k.s_max == 6);
  CHECK(k.mode_lag() == 0);
  for (std::size_t j = 1; j < k.weights.size(); ++j) {
    CHECK(k.weights[j] < k.weights[j - 1]);
  }
  CHECK(weight_sum(k) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("kernel construction rejects bad parameters") {
  CHECK_THROWS_AS(build_kernel(-1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(build_kernel(1.0, -0.5), std::invalid_argument);
  CHECK_THROWS_AS(build_kernel(std::nan(""), 1.0), std::invalid_argument);
  CHECK_THROWS_AS(build_kernel(1.0, std::numeric_limits<double>::infinity()),
                  std::invalid_argument);
}

TEST_CASE("random kernels: normalization, unimodality, coverage, translation") {
  swr::Rng rng(20240811);
  for (int trial = 0; trial < 400; ++trial) {
    const double delta = rng.uniform(0.0, 25.0);
    const double sigma = rng.uniform(0.0, 6.0);
    const WindowKernel k = build_kernel(delta, sigma);

    CHECK(std::abs(weight_sum(k) - 1.0) <= 1e-12);
    for (double w : k.weights) CHECK(w >= 0.0);
    CHECK(unimodal(k));
    CHECK(std::abs(k.mode_lag() - delta) <= 0.5 + 1e-9);

    if (sigma > 0.0 && delta >= 3.0 * sigma) {
      // discretized mass of the untruncated window before normalization
      auto cdf = [](double z) { return 0.5 * (1.0 + std::erf(z / std::sqrt(2.0))); };
      const double mass = cdf((k.s_max + 0.5 - delta) / sigma) -
                          cdf((k.s_min - 0.5 - delta) / sigma);
      CHECK(mass >= 0.99);

      // shifting delta by one lag shifts the kernel by one lag
      const WindowKernel shifted = build_kernel(delta + 1.0, sigma);
      REQUIRE(shifted.weights.size() == k.weights.size());
      CHECK(shifted.s_min == k.s_min + 1);
      for (std::size_t j = 0; j < k.weights.size(); ++j) {
        CHECK(shifted.weights[j] == doctest::Approx(k.weights[j]).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("build_kernel is pure: identical inputs give bit-identical weights") {
  const WindowKernel a = build_kernel(4.7, 1.9);
  const WindowKernel b = build_kernel(4.7, 1.9);
  REQUIRE(a.weights.size() == b.weights.size());
  CHECK(std::memcmp(a.weights.data(), b.weights.data(),
                    a.weights.size() * sizeof(double)) == 0);
}

TEST_CASE("combine_kernels: identity, normalization, bimodal mixture") {
  const WindowKernel single = build_kernel(4.0, 1.0);
  const auto identity = combine_kernels({single}, {1.0}, false);
  CHECK(identity == single.dense());

  const auto two = combine_kernels({build_kernel(2.0, 0.0), build_kernel(5.0, 0.0)},
                                   {1.0, 3.0}, true);
  REQUIRE(two.size() == 6);
  CHECK(two[2] == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(two[5] == doctest::Approx(0.75).epsilon(1e-12));

  // truncated component at delta1, symmetric one at delta2, equal weights:
  // the mixture keeps both peaks
  const WindowKernel k1 = build_kernel(1.0, 1.0);
  const WindowKernel k2 = build_kernel(8.0, 2.0);
  const auto mix = combine_kernels({k1, k2}, {1.0, 1.0}, true);
  auto is_local_max = [&](std::size_t i) {
    const double left = i > 0 ? mix[i - 1] : -1.0;
    const double right = i + 1 < mix.size() ? mix[i + 1] : -1.0;
    return mix[i] > left && mix[i] >= right;
  };
  CHECK(is_local_max(1));
  CHECK(is_local_max(8));
}

TEST_CASE("combine_kernels rejects bad input") {
  CHECK_THROWS_AS((combine_kernels({}, {}, false)), std::invalid_argument);
  const WindowKernel k = build_kernel(2.0, 1.0);
  CHECK_THROWS_AS((combine_kernels({k}, {-1.0}, false)), std::invalid_argument);
  CHECK_THROWS_AS((combine_kernels({k}, {1.0, 2.0}, false)), std::invalid_argument);
  CHECK_THROWS_AS((combine_kernels({k}, {0.0}, true)), std::invalid_argument);
}
