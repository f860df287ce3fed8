#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "swr/metrics.hpp"

using namespace swr;

TEST_CASE("r2: identities and substitution") {
  const std::vector<double> y{1.0, 2.0, 3.0, 4.0};
  CHECK(r2(y, y) == 1.0);

  const std::vector<double> mean_pred(4, 2.5);
  CHECK(r2(y, mean_pred) == doctest::Approx(0.0).epsilon(1e-15));

  const std::vector<double> p{1.0, 2.0, 3.0, 6.0};
  CHECK(r2(y, p) == doctest::Approx(0.2).epsilon(1e-12));

  const std::vector<double> constant(4, 3.0);
  CHECK_THROWS_AS(r2(constant, y), std::invalid_argument);
}

TEST_CASE("r2 is invariant under a joint constant shift") {
  const std::vector<double> y{1.0, 5.0, 2.0, 8.0, 3.0};
  const std::vector<double> p{1.5, 4.0, 2.5, 7.0, 3.5};
  std::vector<double> ys(y), ps(p);
  for (double& v : ys) v += 11.25;
  for (double& v : ps) v += 11.25;
  CHECK(r2(y, p) == doctest::Approx(r2(ys, ps)).epsilon(1e-12));
}

TEST_CASE("kge: identities") {
  const std::vector<double> y{1.0, 2.0, 3.0, 4.0};
  CHECK(kge(y, y) == doctest::Approx(1.0).epsilon(1e-15));

  std::vector<double> twice(y);
  for (double& v : twice) v *= 2.0;
  CHECK(kge(y, twice) == doctest::Approx(1.0 - std::sqrt(2.0)).epsilon(1e-12));

  const double mu = 2.5;
  std::vector<double> shifted(y);
  for (double& v : shifted) v += mu;
  CHECK(kge(y, shifted) == doctest::Approx(0.0).epsilon(1e-12));

  const std::vector<double> constant(4, 1.0);
  CHECK_THROWS_AS(kge(y, constant), std::invalid_argument);
  const std::vector<double> zero_mean{-1.0, 1.0, -1.0, 1.0};
  CHECK_THROWS_AS(kge(zero_mean, y), std::invalid_argument);
}

TEST_CASE("rmse: identities") {
  const std::vector<double> y{1.0, 2.0};
  CHECK(rmse(y, y) == 0.0);

  const std::vector<double> off{4.0, 5.0};
  CHECK(rmse(y, off) == doctest::Approx(3.0).epsilon(1e-15));

  const std::vector<double> zeros{0.0, 0.0};
  const std::vector<double> p{3.0, 4.0};
  CHECK(rmse(zeros, p) == doctest::Approx(std::sqrt(12.5)).epsilon(1e-12));
}

TEST_CASE("kernel overlap: identities and bounds") {
  const std::vector<double> a{0.5, 0.5};
  CHECK(kernel_overlap(a, a) == doctest::Approx(1.0).epsilon(1e-15));

  const std::vector<double> left{1.0, 0.0};
  const std::vector<double> right{0.0, 1.0};
  CHECK(kernel_overlap(left, right) == 0.0);

  const std::vector<double> b{0.25, 0.75};
  CHECK(kernel_overlap(a, b) == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(kernel_overlap(b, a) == doctest::Approx(0.75).epsilon(1e-12));  // symmetric

  // shorter vector is zero-padded
  const std::vector<double> padded{0.5, 0.5, 0.0, 0.0};
  CHECK(kernel_overlap(a, padded) == doctest::Approx(1.0).epsilon(1e-12));

  const std::vector<double> not_normalized{0.5, 0.6};
  const std::vector<double> negative{1.5, -0.5};
  CHECK_THROWS_AS(kernel_overlap(not_normalized, a), std::invalid_argument);
  CHECK_THROWS_AS(kernel_overlap(negative, a), std::invalid_argument);
}

TEST_CASE("max R2 under iid noise reproduces the published levels") {
  CHECK(max_r2_iid(0.0) == 1.0);
  CHECK(max_r2_iid(0.5) == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(std::round(max_r2_iid(0.95) * 1000.0) / 1000.0 == 0.526);
}

TEST_CASE("max R2 under AR(1) noise") {
  // large-t limit with phi = 0.5: xi -> 4/3
  CHECK(max_r2_ar1(0.5, 0.5, 10000) == doctest::Approx(0.75).epsilon(1e-9));
  CHECK(std::round(max_r2_ar1(0.95, 0.5, 10000) * 1000.0) / 1000.0 == 0.454);
  // phi = 0 reduces to the iid bound for any t >= 2
  for (std::size_t t : {2ul, 5ul, 50ul}) {
    CHECK(max_r2_ar1(0.3, 0.0, t) == doctest::Approx(max_r2_iid(0.3)).epsilon(1e-15));
  }
  CHECK_THROWS_AS(max_r2_ar1(0.5, 1.0, 100), std::invalid_argument);
}

TEST_CASE("max R2 curves are monotone in the noise and the correlation") {
  double prev = max_r2_iid(0.01);
  for (double alpha : {0.1, 0.3, 0.6, 1.0, 2.0}) {
    const double v = max_r2_iid(alpha);
    CHECK(v < prev);
    prev = v;
  }
  prev = max_r2_ar1(0.5, 0.0, 1000);
  for (double phi : {0.2, 0.4, 0.6, 0.8, 0.95}) {
    const double v = max_r2_ar1(0.5, phi, 1000);
    CHECK(v < prev);
    prev = v;
  }
}

TEST_CASE("evaluate bundles the three scores") {
  const std::vector<double> y{1.0, 2.0, 3.0, 4.0};
  const EvalScores s = evaluate(y, y);
  CHECK(s.r2 == 1.0);
  CHECK(s.kge == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(s.rmse == 0.0);
  CHECK(s.n_points == 4);
}
