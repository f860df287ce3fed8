#include "swr/serialize.hpp"

#include <charconv>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace swr {

namespace {

// shortest round-trip decimal form, used for CSV output
std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

nlohmann::json json_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

}  // namespace

nlohmann::json kernel_to_json(const WindowKernel& kernel) {
  return {{"delta", kernel.params.delta},
          {"sigma", kernel.params.sigma},
          {"s_min", kernel.s_min},
          {"s_max", kernel.s_max},
          {"weights", kernel.weights}};
}

nlohmann::json model_to_json(const SwrModel& model) {
  nlohmann::json windows = nlohmann::json::array();
  for (std::size_t i = 0; i < model.window_count(); ++i) {
    windows.push_back({{"beta", model.betas[i]},
                       {"delta", model.windows[i].params.delta},
                       {"sigma", model.windows[i].params.sigma}});
  }
  nlohmann::json j{{"windows", std::move(windows)}, {"error_sd", model.error_sd}};
  if (model.intercept) j["intercept"] = *model.intercept;
  return j;
}

SwrModel model_from_json(const nlohmann::json& j) {
  std::vector<WindowKernel> kernels;
  std::vector<double> betas;
  for (const auto& w : j.at("windows")) {
    kernels.push_back(build_kernel(w.at("delta").get<double>(), w.at("sigma").get<double>()));
    betas.push_back(w.at("beta").get<double>());
  }
  std::optional<double> intercept;
  if (j.contains("intercept")) intercept = j.at("intercept").get<double>();
  return make_model(std::move(kernels), std::move(betas), intercept,
                    j.value("error_sd", 0.0));
}

nlohmann::json autocorr_to_json(const AutocorrInfo& info) {
  nlohmann::json stages = nlohmann::json::array();
  for (const AutocorrStage& s : info.stages) {
    stages.push_back({{"order", s.ar.order},
                      {"phi", s.ar.phi},
                      {"innovation_sd", s.ar.innovation_sd},
                      {"dw_after", {{"d", s.dw_after.statistic}, {"p", s.dw_after.p_value}}}});
  }
  return {{"order", info.order},
          {"phi", info.phi},
          {"innovation_sd", info.innovation_sd},
          {"dw_before", {{"d", info.dw_before.statistic}, {"p", info.dw_before.p_value}}},
          {"dw_after", {{"d", info.dw_after.statistic}, {"p", info.dw_after.p_value}}},
          {"passed", info.passed},
          {"stages", std::move(stages)}};
}

nlohmann::json uncertainty_to_json(const UncertaintyReport& report) {
  nlohmann::json params = nlohmann::json::array();
  for (std::size_t i = 0; i < report.parameter_names.size(); ++i) {
    params.push_back({{"name", report.parameter_names[i]},
                      {"value", report.values[i]},
                      {"std_error", json_or_null(report.std_errors[i])}});
  }
  // per-window view in the value +/- se layout
  const std::size_t k = report.parameter_names.size() / 3;
  nlohmann::json windows = nlohmann::json::array();
  for (std::size_t i = 0; i < k; ++i) {
    windows.push_back(
        {{"beta", {{"value", report.values[i]}, {"se", json_or_null(report.std_errors[i])}}},
         {"delta",
          {{"value", report.values[k + i]}, {"se", json_or_null(report.std_errors[k + i])}}},
         {"sigma",
          {{"value", report.values[2 * k + i]},
           {"se", json_or_null(report.std_errors[2 * k + i])}}}});
  }
  return {{"parameters", std::move(params)}, {"windows", std::move(windows)}};
}

nlohmann::json fit_report_to_json(const FitReport& report) {
  nlohmann::json iterations = nlohmann::json::array();
  for (const IterationRecord& rec : report.iterations) {
    iterations.push_back({{"k", rec.k},
                          {"init_delta", rec.init_delta},
                          {"model", model_to_json(rec.model)},
                          {"log_likelihood", rec.log_lik},
                          {"aic", rec.aic},
                          {"bic", rec.bic},
                          {"evals_best", rec.evals_best},
                          {"evals_total", rec.evals_total},
                          {"converged", rec.converged}});
  }
  nlohmann::json kernels = nlohmann::json::array();
  for (const WindowKernel& k : report.final_model.windows) {
    kernels.push_back(kernel_to_json(k));
  }
  nlohmann::json j{{"criterion", to_string(report.criterion)},
                   {"selected_iteration", report.selected_iteration},
                   {"selected_k", report.selected_k},
                   {"final_model", model_to_json(report.final_model)},
                   {"final_kernels", std::move(kernels)},
                   {"iterations", std::move(iterations)}};
  if (report.autocorr) j["autocorr"] = autocorr_to_json(*report.autocorr);
  if (report.uncertainty) j["uncertainty"] = uncertainty_to_json(*report.uncertainty);
  return j;
}

nlohmann::json scores_to_json(const EvalScores& scores) {
  return {{"r2", scores.r2},
          {"kge", scores.kge},
          {"rmse", scores.rmse},
          {"n_points", scores.n_points}};
}

nlohmann::json study_summary_json(const StudyReport& report) {
  nlohmann::json by_alpha = nlohmann::json::array();
  for (const AlphaSummary& s : summarize_by_alpha(report)) {
    by_alpha.push_back({{"alpha", s.alpha},
                        {"mean_r2", s.mean_r2},
                        {"mean_kge", s.mean_kge},
                        {"mean_rmse", s.mean_rmse},
                        {"mean_overlap", s.mean_overlap},
                        {"cells", s.cells}});
  }
  nlohmann::json overlap_by_k = nlohmann::json::object();
  for (const auto& [k, v] : mean_overlap_by_k(report)) {
    overlap_by_k[std::to_string(k)] = v;
  }
  nlohmann::json hist = nlohmann::json::object();
  for (const auto& [dk, count] : delta_k_histogram(report)) {
    hist[std::to_string(dk)] = count;
  }
  int failures = 0;
  for (const CellResult& c : report.cells) failures += c.failed ? 1 : 0;
  return {{"cells", report.cells.size()},
          {"failures", failures},
          {"by_alpha", std::move(by_alpha)},
          {"mean_overlap_by_k", std::move(overlap_by_k)},
          {"delta_k_histogram", std::move(hist)}};
}

std::string study_csv(const StudyReport& report) {
  std::ostringstream out;
  out << "setup_id,k_gt,alpha,process,overlap,r2,kge,rmse,k_selected,delta_k,phi_hat,"
         "failed,error\n";
  for (const CellResult& c : report.cells) {
    out << c.setup_id << ',' << c.k_gt << ',' << format_double(c.alpha) << ','
        << to_string(c.process) << ',';
    if (c.failed) {
      out << ",,,,,,";
    } else {
      out << format_double(c.overlap) << ',' << format_double(c.r2) << ','
          << format_double(c.kge) << ',' << format_double(c.rmse) << ',' << c.k_selected
          << ',' << c.delta_k << ',';
    }
    if (c.phi_hat) out << format_double(*c.phi_hat);
    out << ',' << (c.failed ? 1 : 0) << ',' << c.error << '\n';
  }
  return out.str();
}

std::string fit_summary_table(const FitReport& report) {
  std::ostringstream out;
  out << " iter   k        logL         AIC         BIC   init_delta    evals\n";
  for (const IterationRecord& rec : report.iterations) {
    out << std::setw(5) << rec.k << std::setw(4) << rec.model.window_count()
        << std::setw(12) << std::fixed << std::setprecision(2) << rec.log_lik
        << std::setw(12) << rec.aic << std::setw(12) << rec.bic << std::setw(13)
        << std::setprecision(3) << rec.init_delta << std::setw(9) << rec.evals_total
        << '\n';
    out.unsetf(std::ios::floatfield);
  }
  out << "selected: k=" << report.selected_k << " by " << to_string(report.criterion)
      << " (iteration " << report.selected_iteration << ")\n";
  out << "window        beta       delta       sigma\n";
  const SwrModel& m = report.final_model;
  for (std::size_t i = 0; i < m.window_count(); ++i) {
    out << std::setw(6) << i + 1 << std::setw(12) << std::fixed << std::setprecision(4)
        << m.betas[i] << std::setw(12) << m.windows[i].params.delta << std::setw(12)
        << m.windows[i].params.sigma << '\n';
    out.unsetf(std::ios::floatfield);
  }
  if (m.intercept) {
    out << "intercept " << std::setprecision(6) << *m.intercept << '\n';
  }
  out << "error_sd " << std::setprecision(6) << m.error_sd << '\n';
  return out.str();
}

std::string scores_table(const EvalScores& scores) {
  std::ostringstream out;
  out << "      R2       KGE      RMSE   points\n";
  out << std::setw(8) << std::fixed << std::setprecision(4) << scores.r2 << std::setw(10)
      << scores.kge << std::setw(10) << scores.rmse << std::setw(9) << scores.n_points
      << '\n';
  return out.str();
}

}  // namespace swr
