#include "swr/autocorr.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "swr/rng.hpp"

namespace swr {

namespace {

double dw_statistic(const std::vector<double>& e, double sum_sq) {
  double num = 0.0;
  for (std::size_t t = 1; t < e.size(); ++t) {
    const double d = e[t] - e[t - 1];
    num += d * d;
  }
  return num / sum_sq;
}

// Moduli of the characteristic roots of 1 - phi_1 z - ... - phi_m z^m, via
// the eigenvalues of the companion matrix of the reversed polynomial (the
// eigenvalues are the inverse roots).
std::vector<double> inverse_root_moduli(const std::vector<double>& phi) {
  const int m = static_cast<int>(phi.size());
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(m, m);
  for (int j = 0; j < m; ++j) companion(0, j) = phi[static_cast<std::size_t>(j)];
  for (int i = 1; i < m; ++i) companion(i, i - 1) = 1.0;
  const Eigen::VectorXcd eig = companion.eigenvalues();
  std::vector<double> moduli(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) moduli[static_cast<std::size_t>(i)] = std::abs(eig(i));
  return moduli;
}

// Margin below 1 that inverse roots must keep; flags near-unit-root fits
// (e.g. a constant series) where the quasi-differencing would degenerate.
constexpr double kStationarityMargin = 1e-3;

}  // namespace

DwResult durbin_watson(const std::vector<double>& residuals, int n_boot,
                       std::uint64_t seed) {
  if (residuals.size() < 3) {
    throw std::invalid_argument("durbin_watson: needs at least 3 residuals");
  }
  if (n_boot < 1) throw std::invalid_argument("durbin_watson: n_boot must be positive");
  double sum_sq = 0.0;
  for (double e : residuals) sum_sq += e * e;
  if (sum_sq == 0.0) {
    throw std::invalid_argument("durbin_watson: residuals are all zero");
  }

  DwResult result;
  result.statistic = dw_statistic(residuals, sum_sq);

  // The denominator is permutation-invariant, only the numerator changes.
  Rng rng(seed);
  std::vector<double> perm = residuals;
  int count = 0;
  for (int b = 0; b < n_boot; ++b) {
    for (std::size_t i = perm.size() - 1; i > 0; --i) {
      const std::size_t j = static_cast<std::size_t>(rng.below(i + 1));
      std::swap(perm[i], perm[j]);
    }
    if (dw_statistic(perm, sum_sq) <= result.statistic) ++count;
  }
  result.p_value = static_cast<double>(count) / static_cast<double>(n_boot);
  return result;
}

ArModel fit_ar(const std::vector<double>& residuals, int order) {
  if (order < 1) throw std::invalid_argument("fit_ar: order must be >= 1");
  const std::size_t n = residuals.size();
  if (n <= static_cast<std::size_t>(order) + 1) {
    throw std::invalid_argument("fit_ar: series too short for the requested order");
  }

  const std::size_t m = static_cast<std::size_t>(order);
  std::vector<double> cov(m + 1, 0.0);
  for (std::size_t j = 0; j <= m; ++j) {
    double s = 0.0;
    for (std::size_t t = j; t < n; ++t) s += residuals[t] * residuals[t - j];
    cov[j] = s / static_cast<double>(n);
  }
  if (cov[0] == 0.0) throw std::invalid_argument("fit_ar: residuals are all zero");

  // Levinson-Durbin recursion.
  std::vector<double> phi(m, 0.0), prev(m, 0.0);
  double err = cov[0];
  for (std::size_t j = 0; j < m; ++j) {
    double acc = cov[j + 1];
    for (std::size_t i = 0; i < j; ++i) acc -= prev[i] * cov[j - i];
    const double reflection = acc / err;
    phi = prev;
    phi[j] = reflection;
    for (std::size_t i = 0; i < j; ++i) phi[i] = prev[i] - reflection * prev[j - 1 - i];
    err *= (1.0 - reflection * reflection);
    prev = phi;
    if (!(err > 0.0)) break;  // degenerate; the root check below will reject
  }

  for (double modulus : inverse_root_moduli(phi)) {
    if (modulus >= 1.0 - kStationarityMargin) {
      std::ostringstream msg;
      msg << "fit_ar: non-stationary AR(" << order
          << ") fit, characteristic root modulus " << (modulus > 0.0 ? 1.0 / modulus : 0.0)
          << " inside the stationarity margin";
      throw std::runtime_error(msg.str());
    }
  }

  ArModel ar;
  ar.order = order;
  ar.phi = std::move(phi);
  ar.innovation_sd = err > 0.0 ? std::sqrt(err) : 0.0;
  return ar;
}

std::vector<double> cochrane_orcutt_transform(const std::vector<double>& z,
                                              const ArModel& ar) {
  const std::size_t m = ar.phi.size();
  if (z.size() <= m) {
    throw std::invalid_argument("cochrane_orcutt_transform: series too short");
  }
  std::vector<double> out(z.size() - m);
  for (std::size_t t = m; t < z.size(); ++t) {
    double v = z[t];
    for (std::size_t j = 0; j < m; ++j) v -= ar.phi[j] * z[t - 1 - j];
    out[t - m] = v;
  }
  return out;
}

}  // namespace swr
