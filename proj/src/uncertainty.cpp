#include "swr/uncertainty.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <stdexcept>

#include "objective.hpp"

namespace swr {

namespace {
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
}

std::vector<std::vector<double>> fd_hessian(
    const std::function<double(const std::vector<double>&)>& objective,
    const std::vector<double>& theta, const std::vector<double>& lower_bounds,
    std::vector<bool>* available) {
  const std::size_t n = theta.size();
  if (n == 0) throw std::invalid_argument("fd_hessian: empty parameter vector");
  if (!lower_bounds.empty() && lower_bounds.size() != n) {
    throw std::invalid_argument("fd_hessian: bounds have wrong dimension");
  }

  std::vector<double> h(n);
  std::vector<bool> usable(n, true);
  for (std::size_t j = 0; j < n; ++j) {
    h[j] = std::max(1e-5, 1e-5 * std::abs(theta[j]));
    // a parameter this close to its bound has no two-sided stencil; its
    // entries are reported unavailable rather than with a bogus number
    if (!lower_bounds.empty() && theta[j] - h[j] < lower_bounds[j]) usable[j] = false;
  }

  auto at = [&](std::size_t i, double di, std::size_t j, double dj) {
    std::vector<double> p = theta;
    p[i] += di;
    if (j != i) p[j] += dj;
    return objective(p);
  };

  const double f0 = objective(theta);
  std::vector<double> f_plus(n, kNan), f_minus(n, kNan);
  for (std::size_t j = 0; j < n; ++j) {
    if (!usable[j]) continue;
    f_plus[j] = at(j, h[j], j, 0.0);
    f_minus[j] = at(j, -h[j], j, 0.0);
    if (!std::isfinite(f_plus[j]) || !std::isfinite(f_minus[j])) usable[j] = false;
  }
  if (!std::isfinite(f0)) std::fill(usable.begin(), usable.end(), false);

  std::vector<std::vector<double>> hess(n, std::vector<double>(n, kNan));
  for (std::size_t i = 0; i < n; ++i) {
    if (!usable[i]) continue;
    hess[i][i] = (f_plus[i] - 2.0 * f0 + f_minus[i]) / (h[i] * h[i]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!usable[i] || !usable[j]) continue;
      const double fpp = at(i, h[i], j, h[j]);
      const double fpm = at(i, h[i], j, -h[j]);
      const double fmp = at(i, -h[i], j, h[j]);
      const double fmm = at(i, -h[i], j, -h[j]);
      const double v = (fpp - fpm - fmp + fmm) / (4.0 * h[i] * h[j]);
      if (!std::isfinite(v)) {
        usable[i] = usable[j] = false;
        continue;
      }
      hess[i][j] = v;
      hess[j][i] = v;  // computed once, so symmetry is exact
    }
  }
  // wipe rows/cols invalidated after their diagonal was written
  for (std::size_t i = 0; i < n; ++i) {
    if (usable[i]) continue;
    for (std::size_t j = 0; j < n; ++j) hess[i][j] = hess[j][i] = kNan;
  }

  if (available) *available = usable;
  return hess;
}

UncertaintyReport observed_information(const SwrModel& model, const TimeSeriesPair& data,
                                       double variance_floor) {
  const std::size_t k = model.window_count();
  const bool has_intercept = model.intercept.has_value();
  const std::size_t dim = 3 * k + (has_intercept ? 1 : 0);

  UncertaintyReport report;
  report.parameter_names.reserve(dim);
  report.values.reserve(dim);
  for (std::size_t i = 0; i < k; ++i) {
    report.parameter_names.push_back("beta" + std::to_string(i + 1));
    report.values.push_back(model.betas[i]);
  }
  for (std::size_t i = 0; i < k; ++i) {
    report.parameter_names.push_back("delta" + std::to_string(i + 1));
    report.values.push_back(model.windows[i].params.delta);
  }
  for (std::size_t i = 0; i < k; ++i) {
    report.parameter_names.push_back("sigma" + std::to_string(i + 1));
    report.values.push_back(model.windows[i].params.sigma);
  }
  std::vector<double> lower(3 * k, 0.0);
  if (has_intercept) {
    report.parameter_names.push_back("intercept");
    report.values.push_back(*model.intercept);
    lower.push_back(-std::numeric_limits<double>::infinity());
  }

  validate_pair(data);
  const detail::ParamObjective nll(data, static_cast<int>(k), has_intercept,
                                   detail::LossKind::nll, variance_floor);
  report.hessian = fd_hessian(nll, report.values, lower, &report.available);

  // invert the usable block for standard errors
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < dim; ++i) {
    if (report.available[i]) idx.push_back(i);
  }
  report.std_errors.assign(dim, kNan);
  if (!idx.empty()) {
    Eigen::MatrixXd block(idx.size(), idx.size());
    for (std::size_t a = 0; a < idx.size(); ++a) {
      for (std::size_t b = 0; b < idx.size(); ++b) {
        block(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
            report.hessian[idx[a]][idx[b]];
      }
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(block);
    if (lu.isInvertible()) {
      const Eigen::MatrixXd inv = lu.inverse();
      for (std::size_t a = 0; a < idx.size(); ++a) {
        const double var = inv(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(a));
        if (var > 0.0) {
          report.std_errors[idx[a]] = std::sqrt(var);
        } else {
          report.available[idx[a]] = false;
        }
      }
    } else {
      for (std::size_t i : idx) report.available[i] = false;
    }
  }
  return report;
}

}  // namespace swr
