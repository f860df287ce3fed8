#include "swr/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "swr/metrics.hpp"
#include "swr/rng.hpp"

namespace swr {

std::vector<double> synthetic_rainfall(const RainfallSpec& spec) {
  if (spec.length == 0) throw std::invalid_argument("synthetic_rainfall: empty length");
  if (!(spec.spike_rate > 0.0 && spec.spike_rate <= 1.0)) {
    throw std::invalid_argument("synthetic_rainfall: spike_rate must lie in (0, 1]");
  }
  if (!(spec.spike_scale > 0.0)) {
    throw std::invalid_argument("synthetic_rainfall: spike_scale must be positive");
  }
  Rng rng(spec.seed);
  std::vector<double> x(spec.length, 0.0);
  for (double& v : x) {
    if (rng.uniform() < spec.spike_rate) v = rng.exponential(spec.spike_scale);
  }
  return x;
}

SwrModel sample_truth(int k, std::uint64_t seed, double min_delta_gap) {
  if (k < 1) throw std::invalid_argument("sample_truth: k must be >= 1");
  Rng rng(seed);
  std::vector<double> deltas(static_cast<std::size_t>(k));
  std::vector<double> sigmas(static_cast<std::size_t>(k));
  std::vector<double> betas(static_cast<std::size_t>(k));
  for (int attempt = 0; attempt < 100000; ++attempt) {
    for (std::size_t i = 0; i < deltas.size(); ++i) {
      deltas[i] = rng.uniform(0.0, 20.0);
      sigmas[i] = rng.uniform(0.0, 5.0);
      betas[i] = rng.uniform(0.0, 5.0);
    }
    std::sort(deltas.begin(), deltas.end());
    bool separated = true;
    for (std::size_t i = 1; i < deltas.size(); ++i) {
      if (deltas[i] - deltas[i - 1] < min_delta_gap) separated = false;
    }
    if (!separated) continue;

    std::vector<WindowKernel> windows;
    windows.reserve(deltas.size());
    for (std::size_t i = 0; i < deltas.size(); ++i) {
      windows.push_back(build_kernel(deltas[i], sigmas[i]));
    }
    return make_model(std::move(windows), betas);
  }
  throw std::runtime_error("sample_truth: could not separate window locations");
}

SimResult generate(const SimSetup& setup, const std::vector<double>& input) {
  if (!(setup.alpha >= 0.0)) throw std::invalid_argument("generate: alpha must be >= 0");
  if (setup.process == ErrorProcess::ar1 && !(std::abs(setup.phi) < 1.0)) {
    throw std::invalid_argument("generate: AR(1) phi must lie in (-1, 1)");
  }
  for (double v : input) {
    if (!std::isfinite(v)) throw std::invalid_argument("generate: non-finite input");
  }
  const std::size_t n = input.size();
  const std::size_t first_valid = static_cast<std::size_t>(setup.truth.max_lag());
  if (n <= first_valid + 2) {
    throw std::invalid_argument("generate: truth model needs a longer series");
  }

  // noiseless output with the input treated as zero before the record
  const std::vector<double> w = combine_kernels(setup.truth.windows, setup.truth.betas, false);
  const double c = setup.truth.intercept.value_or(0.0);
  std::vector<double> clean(n);
  for (std::size_t t = 0; t < n; ++t) {
    double acc = c;
    const std::size_t s_end = std::min(w.size(), t + 1);
    for (std::size_t s = 0; s < s_end; ++s) acc += w[s] * input[t - s];
    clean[t] = acc;
  }

  // noise scale from the sample variance over the predictable range
  double mean = 0.0;
  const double count = static_cast<double>(n - first_valid);
  for (std::size_t t = first_valid; t < n; ++t) mean += clean[t];
  mean /= count;
  double var = 0.0;
  for (std::size_t t = first_valid; t < n; ++t) {
    var += (clean[t] - mean) * (clean[t] - mean);
  }
  var /= (count - 1.0);
  const double rho = setup.alpha * std::sqrt(var);

  Rng rng(setup.seed);
  std::vector<double> eps(n);
  if (setup.process == ErrorProcess::iid) {
    for (double& e : eps) e = rho * rng.normal();
  } else {
    double prev = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      const double eta = rho * rng.normal();
      prev = (t == 0) ? eta : setup.phi * prev + eta;
      eps[t] = prev;
    }
  }

  SimResult result;
  result.data.x = input;
  result.data.y.resize(n);
  for (std::size_t t = 0; t < n; ++t) result.data.y[t] = clean[t] + eps[t];
  result.truth = setup.truth;
  result.truth.error_sd = rho;
  result.first_valid = first_valid;
  result.noiseless = std::move(clean);
  result.noise = std::move(eps);
  result.noise_sd = rho;
  return result;
}

namespace {

struct CellSpec {
  int cell_index;
  int setup_id;
  int k_gt;
  double alpha;
  std::uint64_t noise_seed;
  const SwrModel* truth;
};

CellResult run_cell(const CellSpec& spec, const std::vector<double>& rainfall,
                    const StudyGridConfig& cfg) {
  CellResult cell;
  cell.cell_index = spec.cell_index;
  cell.setup_id = spec.setup_id;
  cell.k_gt = spec.k_gt;
  cell.alpha = spec.alpha;
  cell.process = cfg.process;
  cell.noise_seed = spec.noise_seed;
  try {
    SimSetup setup;
    setup.truth = *spec.truth;
    setup.alpha = spec.alpha;
    setup.process = cfg.process;
    setup.phi = cfg.phi;
    setup.seed = spec.noise_seed;
    const SimResult sim = generate(setup, rainfall);

    const std::size_t n = rainfall.size();
    const std::size_t split_at = static_cast<std::size_t>(
        std::floor(cfg.split * static_cast<double>(n)));
    if (split_at <= sim.first_valid + 8 || split_at >= n) {
      throw std::invalid_argument("run_study: split leaves too little data");
    }
    TimeSeriesPair train;
    train.x.assign(sim.data.x.begin(), sim.data.x.begin() + static_cast<long>(split_at));
    train.y.assign(sim.data.y.begin(), sim.data.y.begin() + static_cast<long>(split_at));

    const FitReport report =
        cfg.use_autocorr
            ? fit_with_autocorr(train, cfg.fit, cfg.max_ar_order, cfg.dw_alpha,
                                cfg.n_boot, cfg.seed + 500000 +
                                    static_cast<std::uint64_t>(spec.cell_index))
            : fit(train, cfg.fit);

    // held-out scores with the full input history available to the model
    const Prediction pred = predict(report.final_model, sim.data.x);
    if (pred.first_valid > split_at) {
      throw std::runtime_error("run_study: fitted model cannot predict the test range");
    }
    const std::span<const double> obs(sim.data.y.data() + split_at, n - split_at);
    const std::span<const double> est(pred.values.data() + split_at, n - split_at);
    const EvalScores scores = evaluate(obs, est);

    const std::vector<double> w_true =
        combine_kernels(sim.truth.windows, sim.truth.betas, true);
    const std::vector<double> w_fit = combine_kernels(report.final_model.windows,
                                                      report.final_model.betas, true);
    cell.overlap = kernel_overlap(w_true, w_fit);
    cell.r2 = scores.r2;
    cell.kge = scores.kge;
    cell.rmse = scores.rmse;
    cell.k_selected = report.selected_k;
    cell.delta_k = report.selected_k - spec.k_gt;
    if (report.autocorr && report.autocorr->order > 0) {
      cell.phi_hat = report.autocorr->phi.front();
    }
  } catch (const std::exception& e) {
    cell.failed = true;
    cell.error = e.what();
  }
  return cell;
}

}  // namespace

StudyReport run_study(const StudyGridConfig& cfg) {
  if (cfg.setups_per_k < 1) throw std::invalid_argument("run_study: setups_per_k must be >= 1");
  if (cfg.k_values.empty() || cfg.alphas.empty()) {
    throw std::invalid_argument("run_study: empty grid");
  }
  if (!(cfg.split > 0.0 && cfg.split < 1.0)) {
    throw std::invalid_argument("run_study: split must lie in (0, 1)");
  }

  RainfallSpec rain;
  rain.length = cfg.length;
  rain.spike_rate = cfg.spike_rate;
  rain.spike_scale = cfg.spike_scale;
  rain.seed = cfg.seed + 900001;
  const std::vector<double> rainfall = synthetic_rainfall(rain);

  // sample all ground truths up front (cheap, single-threaded, reproducible)
  std::vector<SwrModel> truths;
  std::vector<CellSpec> specs;
  int setup_id = 0;
  for (int k : cfg.k_values) {
    for (int j = 0; j < cfg.setups_per_k; ++j) {
      const std::uint64_t truth_seed =
          cfg.seed + 90000 + static_cast<std::uint64_t>(100 * k + j);
      truths.push_back(sample_truth(k, truth_seed, cfg.min_delta_gap));
      ++setup_id;
    }
  }
  int cell_index = 0;
  setup_id = 0;
  for (std::size_t ki = 0; ki < cfg.k_values.size(); ++ki) {
    for (int j = 0; j < cfg.setups_per_k; ++j) {
      for (double alpha : cfg.alphas) {
        CellSpec spec;
        spec.cell_index = cell_index;
        spec.setup_id = setup_id;
        spec.k_gt = cfg.k_values[ki];
        spec.alpha = alpha;
        spec.noise_seed = cfg.seed + static_cast<std::uint64_t>(cell_index);
        spec.truth = &truths[static_cast<std::size_t>(setup_id)];
        specs.push_back(spec);
        ++cell_index;
      }
      ++setup_id;
    }
  }

  StudyReport report;
  report.config = cfg;
  report.cells.resize(specs.size());

  unsigned n_threads = cfg.threads > 0 ? cfg.threads : std::thread::hardware_concurrency();
  n_threads = std::max(1u, std::min<unsigned>(n_threads, static_cast<unsigned>(specs.size())));

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= specs.size()) return;
      report.cells[i] = run_cell(specs[i], rainfall, cfg);
    }
  };
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return report;
}

std::map<int, double> mean_overlap_by_k(const StudyReport& report) {
  std::map<int, double> sums;
  std::map<int, int> counts;
  for (const CellResult& c : report.cells) {
    if (c.failed) continue;
    sums[c.k_gt] += c.overlap;
    counts[c.k_gt] += 1;
  }
  for (auto& [k, s] : sums) s /= counts[k];
  return sums;
}

std::map<int, int> delta_k_histogram(const StudyReport& report) {
  std::map<int, int> hist;
  for (const CellResult& c : report.cells) {
    if (!c.failed) hist[c.delta_k] += 1;
  }
  return hist;
}

std::vector<AlphaSummary> summarize_by_alpha(const StudyReport& report) {
  std::map<double, AlphaSummary> by_alpha;
  for (const CellResult& c : report.cells) {
    if (c.failed) continue;
    AlphaSummary& s = by_alpha[c.alpha];
    s.alpha = c.alpha;
    s.mean_r2 += c.r2;
    s.mean_kge += c.kge;
    s.mean_rmse += c.rmse;
    s.mean_overlap += c.overlap;
    s.cells += 1;
  }
  std::vector<AlphaSummary> out;
  for (auto& [alpha, s] : by_alpha) {
    const double n = static_cast<double>(s.cells);
    s.mean_r2 /= n;
    s.mean_kge /= n;
    s.mean_rmse /= n;
    s.mean_overlap /= n;
    out.push_back(s);
  }
  return out;
}

}  // namespace swr
