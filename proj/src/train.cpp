#include "swr/train.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "objective.hpp"
#include "swr/optimize.hpp"
#include "train_detail.hpp"

namespace swr {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using detail::merge_collisions;
using detail::sorted_triples;
using detail::Triple;

SwrModel assemble_model(const std::vector<double>& theta, std::size_t k, bool intercept,
                        const TimeSeriesPair& data, double variance_floor,
                        double merge_tol) {
  const std::vector<Triple> merged = merge_collisions(sorted_triples(theta, k), merge_tol);
  std::vector<WindowKernel> windows;
  std::vector<double> betas;
  windows.reserve(merged.size());
  betas.reserve(merged.size());
  for (const Triple& t : merged) {
    windows.push_back(build_kernel(t.delta, t.sigma));
    betas.push_back(t.beta);
  }
  std::optional<double> c;
  if (intercept) c = theta[3 * k];
  SwrModel model = make_model(std::move(windows), std::move(betas), c, 0.0);

  const FitStats stats = fit_stats(model, data, variance_floor);
  model.error_sd = std::sqrt(stats.sse / static_cast<double>(stats.n_valid));
  return model;
}

void validate_config(const TrainConfig& config) {
  if (config.k_max < 1) throw std::invalid_argument("fit: k_max must be >= 1");
  if (config.zeta_offsets.empty()) {
    throw std::invalid_argument("fit: zeta_offsets must not be empty");
  }
  for (double z : config.zeta_offsets) {
    if (!(z > 0.0)) throw std::invalid_argument("fit: zeta_offsets must be positive");
  }
  if (!(config.ftol_abs > 0.0)) throw std::invalid_argument("fit: ftol_abs must be positive");
  if (!(config.merge_tol >= 0.0)) throw std::invalid_argument("fit: merge_tol must be >= 0");
}

}  // namespace

FitReport fit(const TimeSeriesPair& data, const TrainConfig& config) {
  validate_config(config);
  validate_pair(data);
  if (data.x.size() < 8) {
    throw std::invalid_argument("fit: series too short to fit any window");
  }

  FitReport report;
  report.criterion = config.criterion;

  const detail::LossKind loss =
      config.loss == Loss::nll ? detail::LossKind::nll : detail::LossKind::rmse;

  std::vector<double> prev_betas, prev_deltas, prev_sigmas;
  double prev_intercept = 0.0;

  for (int iter = 1; iter <= config.k_max; ++iter) {
    const std::size_t k = static_cast<std::size_t>(iter);

    std::vector<double> candidates;
    double beta_init = 1.0, sigma_init = 1.0;
    if (iter == 1) {
      candidates.push_back(1.0);
    } else {
      if (config.include_midpoints && iter >= 3) {
        for (std::size_t j = 1; j < prev_deltas.size(); ++j) {
          candidates.push_back(0.5 * (prev_deltas[j - 1] + prev_deltas[j]));
        }
      }
      if (config.include_zero_start) candidates.push_back(0.0);
      for (double zeta : config.zeta_offsets) {
        candidates.push_back(prev_deltas.back() + zeta);
      }
      const double beta_mass =
          std::accumulate(prev_betas.begin(), prev_betas.end(), 0.0);
      const double sigma_mass =
          std::accumulate(prev_sigmas.begin(), prev_sigmas.end(), 0.0);
      beta_init = beta_mass / static_cast<double>(iter);
      sigma_init = sigma_mass / static_cast<double>(iter);
    }

    const std::size_t dim = 3 * k + (config.intercept ? 1 : 0);
    const detail::ParamObjective objective(data, iter, config.intercept, loss,
                                           config.variance_floor);

    struct CandidateFit {
      double init_delta;
      SwrModel model;
      std::vector<double> theta;
      long n_evals;
      bool converged;
    };
    std::vector<CandidateFit> fits;
    long evals_total = 0;
    std::string last_error;

    for (double cand : candidates) {
      std::vector<double> theta0(dim, 0.0);
      for (std::size_t i = 0; i < k; ++i) theta0[i] = beta_init;
      for (std::size_t i = 0; i + 1 < k; ++i) theta0[k + i] = prev_deltas[i];
      theta0[k + (k - 1)] = iter == 1 ? 1.0 : cand;
      for (std::size_t i = 0; i < k; ++i) theta0[2 * k + i] = sigma_init;

      OptProblem problem;
      problem.dim = dim;
      problem.objective = objective;
      problem.lower_bounds.assign(dim, 0.0);
      problem.upper_bounds.assign(dim, kInf);
      if (config.intercept) {
        theta0[3 * k] = prev_intercept;
        problem.lower_bounds[3 * k] = -kInf;
      }
      problem.ftol_abs = config.ftol_abs;
      problem.max_evals = config.max_evals;

      try {
        MinimizeResult res = minimize(problem, theta0);
        evals_total += res.n_evals;
        SwrModel model = assemble_model(res.x, k, config.intercept, data,
                                        config.variance_floor, config.merge_tol);
        fits.push_back({iter == 1 ? 1.0 : cand, std::move(model), std::move(res.x),
                        res.n_evals, res.converged});
      } catch (const std::exception& e) {
        last_error = e.what();
      }
    }

    if (fits.empty()) {
      std::ostringstream msg;
      msg << "fit: every candidate of iteration " << iter << " failed";
      if (!last_error.empty()) msg << " (last error: " << last_error << ")";
      throw TrainError(msg.str(), report);
    }

    // Candidates are only comparable over a shared range: likelihoods on
    // different supports are not the same data. Score everybody from the
    // latest common start.
    std::size_t common_start = 0;
    for (const CandidateFit& f : fits) {
      common_start = std::max(common_start, static_cast<std::size_t>(f.model.max_lag()));
    }
    std::size_t best_idx = 0;
    double best_score = kInf;
    for (std::size_t i = 0; i < fits.size(); ++i) {
      const FitStats stats =
          fit_stats(fits[i].model, data, config.variance_floor, common_start);
      const double score = config.criterion == Criterion::aic ? stats.aic : stats.bic;
      if (score < best_score) {
        best_score = score;
        best_idx = i;
      }
    }
    CandidateFit& winner = fits[best_idx];

    IterationRecord rec;
    rec.k = iter;
    rec.init_delta = winner.init_delta;
    rec.model = winner.model;
    rec.evals_best = winner.n_evals;
    rec.evals_total = evals_total;
    rec.converged = winner.converged;
    report.iterations.push_back(std::move(rec));

    // carry the raw optimized parameters (sorted, unmerged) into the next round
    const std::vector<Triple> tr = sorted_triples(winner.theta, k);
    prev_betas.resize(k);
    prev_deltas.resize(k);
    prev_sigmas.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
      prev_betas[i] = tr[i].beta;
      prev_deltas[i] = tr[i].delta;
      prev_sigmas[i] = tr[i].sigma;
    }
    if (config.intercept) prev_intercept = winner.theta[3 * k];
  }

  // Final scores for all iterations over one common range, so the reported
  // criteria are mutually comparable and the minimum picks the model.
  std::size_t selection_start = 0;
  for (const IterationRecord& rec : report.iterations) {
    selection_start =
        std::max(selection_start, static_cast<std::size_t>(rec.model.max_lag()));
  }
  int best_iter = 0;
  double best_score = kInf;
  for (std::size_t i = 0; i < report.iterations.size(); ++i) {
    IterationRecord& rec = report.iterations[i];
    const FitStats stats =
        fit_stats(rec.model, data, config.variance_floor, selection_start);
    rec.log_lik = stats.log_lik;
    rec.aic = stats.aic;
    rec.bic = stats.bic;
    const double score = config.criterion == Criterion::aic ? rec.aic : rec.bic;
    if (score < best_score) {
      best_score = score;
      best_iter = static_cast<int>(i) + 1;
    }
  }
  report.selected_iteration = best_iter;
  report.final_model = report.iterations[static_cast<std::size_t>(best_iter - 1)].model;
  report.selected_k = static_cast<int>(report.final_model.window_count());
  return report;
}

FitReport fit_with_autocorr(const TimeSeriesPair& data, const TrainConfig& config,
                            int max_order, double dw_alpha, int n_boot,
                            std::uint64_t seed) {
  if (max_order < 1) throw std::invalid_argument("fit_with_autocorr: max_order must be >= 1");
  if (!(dw_alpha > 0.0 && dw_alpha < 1.0)) {
    throw std::invalid_argument("fit_with_autocorr: dw_alpha must lie in (0, 1)");
  }

  FitReport base = fit(data, config);
  const std::vector<double> base_resid = residuals(base.final_model, data);

  AutocorrInfo info;
  info.dw_before = durbin_watson(base_resid, n_boot, seed);
  if (info.dw_before.p_value >= dw_alpha) {
    info.order = 0;
    info.dw_after = info.dw_before;
    info.passed = true;
    base.autocorr = info;
    return base;
  }

  FitReport result = std::move(base);
  for (int order = 1; order <= max_order; ++order) {
    const ArModel ar = fit_ar(base_resid, order);
    TimeSeriesPair transformed;
    transformed.x = cochrane_orcutt_transform(data.x, ar);
    transformed.y = cochrane_orcutt_transform(data.y, ar);

    FitReport refit = fit(transformed, config);
    const std::vector<double> resid = residuals(refit.final_model, transformed);
    const DwResult dw = durbin_watson(resid, n_boot, seed + static_cast<std::uint64_t>(order));

    info.stages.push_back({ar, dw});
    info.order = order;
    info.phi = ar.phi;
    info.innovation_sd = ar.innovation_sd;
    info.dw_after = dw;
    result = std::move(refit);
    if (dw.p_value >= 0.1) {
      info.passed = true;
      break;
    }
  }
  result.autocorr = info;
  return result;
}

}  // namespace swr
