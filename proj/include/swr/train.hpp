#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "swr/autocorr.hpp"
#include "swr/model.hpp"
#include "swr/uncertainty.hpp"

namespace swr {

enum class Criterion { aic, bic };
enum class Loss { nll, rmse };

struct TrainConfig {
  int k_max = 3;
  Criterion criterion = Criterion::bic;
  Loss loss = Loss::nll;
  // New-window location candidates beyond the previous windows: delta_last + zeta.
  std::vector<double> zeta_offsets = {1.0, 5.0, 10.0};
  bool include_zero_start = true;
  bool include_midpoints = true;
  bool intercept = false;
  double ftol_abs = 1e-8;
  long max_evals = 0;  // per candidate; 0 -> 5000 * dim
  double variance_floor = 1e-12;
  // Windows whose fitted locations collide within this tolerance are merged
  // before the criterion is evaluated.
  double merge_tol = 1e-6;
};

struct IterationRecord {
  int k = 0;                // number of windows attempted in this iteration
  double init_delta = 0.0;  // winning start location for the new window
  SwrModel model;           // fitted model (sorted, collisions merged)
  double log_lik = 0.0;
  double aic = 0.0;
  double bic = 0.0;
  long evals_best = 0;   // optimizer evaluations spent on the winning candidate
  long evals_total = 0;  // across all candidates of the iteration
  bool converged = false;
};

struct AutocorrStage {
  ArModel ar;
  DwResult dw_after;
};

struct AutocorrInfo {
  DwResult dw_before;
  int order = 0;  // 0 = residuals already passed, no transformation applied
  std::vector<double> phi;
  double innovation_sd = 0.0;
  DwResult dw_after;
  bool passed = false;
  std::vector<AutocorrStage> stages;
};

struct FitReport {
  std::vector<IterationRecord> iterations;
  Criterion criterion = Criterion::bic;
  int selected_iteration = 0;  // 1-based index into iterations
  int selected_k = 0;          // windows in the final model
  SwrModel final_model;
  std::optional<UncertaintyReport> uncertainty;
  std::optional<AutocorrInfo> autocorr;
};

// Raised when every candidate of a training iteration fails; carries what was
// fitted so far.
class TrainError : public std::runtime_error {
 public:
  TrainError(const std::string& message, FitReport partial)
      : std::runtime_error(message), partial_(std::move(partial)) {}
  const FitReport& partial_report() const { return partial_; }

 private:
  FitReport partial_;
};

/**
 * Fits the model by adding one window per iteration, up to k_max.
 *
 * Iteration 1 starts from beta = delta = sigma = 1. Later iterations try a
 * set of start locations for the new window (midpoints of consecutive fitted
 * windows, zero, and offsets past the last window) while redistributing the
 * accumulated weights and widths equally; every candidate is optimized over
 * all coordinates jointly and the candidate with the best criterion value is
 * kept. The reported model is the iteration with the smallest criterion.
 */
FitReport fit(const TimeSeriesPair& data, const TrainConfig& config = {});

/**
 * fit() plus residual-autocorrelation handling: when the Durbin-Watson test
 * rejects independence (p < dw_alpha), an AR(m) error model is estimated
 * from the residuals, both series are quasi-differenced, and the model is
 * refitted; m escalates until the refit residuals pass (p >= 0.1) or
 * max_order is reached. Failing to pass at max_order is reported, not fatal.
 */
FitReport fit_with_autocorr(const TimeSeriesPair& data, const TrainConfig& config = {},
                            int max_order = 3, double dw_alpha = 0.01,
                            int n_boot = 1000, std::uint64_t seed = 0);

inline const char* to_string(Criterion c) {
  return c == Criterion::aic ? "aic" : "bic";
}
inline const char* to_string(Loss l) { return l == Loss::nll ? "nll" : "rmse"; }

}  // namespace swr
