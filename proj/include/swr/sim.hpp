#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "swr/model.hpp"
#include "swr/train.hpp"

namespace swr {

enum class ErrorProcess { iid, ar1 };

inline const char* to_string(ErrorProcess p) {
  return p == ErrorProcess::iid ? "iid" : "ar1";
}

// Sparse spike input: at each step a spike occurs with probability
// spike_rate and its magnitude is exponential with the given mean.
struct RainfallSpec {
  std::size_t length = 0;
  double spike_rate = 0.3;
  double spike_scale = 1.0;
  std::uint64_t seed = 0;
};

std::vector<double> synthetic_rainfall(const RainfallSpec& spec);

// Ground-truth draw: window locations uniform on [0, 20], widths and weights
// uniform on [0, 5]; locations are re-drawn until all pairwise gaps reach
// min_delta_gap (identifiability guard) and returned sorted ascending.
SwrModel sample_truth(int k, std::uint64_t seed, double min_delta_gap = 0.5);

struct SimSetup {
  SwrModel truth;
  double alpha = 0.0;                       // noise SD relative to SD of the
                                            // noiseless output
  ErrorProcess process = ErrorProcess::iid;
  double phi = 0.5;                         // AR(1) coefficient, |phi| < 1
  std::uint64_t seed = 0;                   // drives the noise draw only
};

struct SimResult {
  TimeSeriesPair data;
  SwrModel truth;      // error_sd filled in with the realized noise SD rho
  std::size_t first_valid = 0;
  std::vector<double> noiseless;
  std::vector<double> noise;
  double noise_sd = 0.0;  // rho = alpha * sd(noiseless over the valid range)
};

/**
 * Builds a target series from the ground-truth model and the given input.
 * The input is treated as zero before the start of the record (no rainfall
 * before observation), which extends the noiseless output over the whole
 * series; on t >= first_valid it coincides with predict(truth, x) exactly.
 * Noise: iid draws N(0, rho^2), or AR(1) built from such innovations with
 * eps_0 = eta_0. Identical seeds reproduce the pair bit for bit; changing
 * the seed changes only the noise.
 */
SimResult generate(const SimSetup& setup, const std::vector<double>& input);

struct StudyGridConfig {
  std::vector<int> k_values = {1, 2, 3};
  int setups_per_k = 3;
  std::vector<double> alphas = {0.05, 0.5};
  ErrorProcess process = ErrorProcess::iid;
  double phi = 0.5;
  std::size_t length = 3000;
  double split = 0.75;  // fraction of the series used for training
  std::uint64_t seed = 1;
  double min_delta_gap = 0.5;
  double spike_rate = 0.3;
  double spike_scale = 1.0;
  TrainConfig fit;
  bool use_autocorr = false;  // route fits through the Cochrane-Orcutt loop
  int max_ar_order = 3;
  double dw_alpha = 0.01;
  int n_boot = 1000;
  unsigned threads = 0;  // 0 -> hardware concurrency
};

struct CellResult {
  int cell_index = 0;
  int setup_id = 0;  // one id per sampled ground truth
  int k_gt = 0;
  double alpha = 0.0;
  ErrorProcess process = ErrorProcess::iid;
  std::uint64_t noise_seed = 0;
  double overlap = 0.0;
  double r2 = 0.0;
  double kge = 0.0;
  double rmse = 0.0;
  int k_selected = 0;
  int delta_k = 0;
  std::optional<double> phi_hat;
  bool failed = false;
  std::string error;
};

struct StudyReport {
  StudyGridConfig config;
  std::vector<CellResult> cells;
};

/**
 * Runs the full grid: every sampled setup at every noise level, fit on the
 * leading split of the series, scores on the held-out remainder plus the
 * kernel overlap against the truth. One shared rainfall series feeds all
 * cells; per-cell noise seeds are seed + cell_index, so results do not
 * depend on scheduling. Cell failures are recorded and the study continues.
 */
StudyReport run_study(const StudyGridConfig& config);

// Aggregations used for reporting.
std::map<int, double> mean_overlap_by_k(const StudyReport& report);
std::map<int, int> delta_k_histogram(const StudyReport& report);

struct AlphaSummary {
  double alpha = 0.0;
  double mean_r2 = 0.0;
  double mean_kge = 0.0;
  double mean_rmse = 0.0;
  double mean_overlap = 0.0;
  int cells = 0;
};
std::vector<AlphaSummary> summarize_by_alpha(const StudyReport& report);

}  // namespace swr
