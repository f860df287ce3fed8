#pragma once

#include <string>

#include <json.hpp>

#include "swr/metrics.hpp"
#include "swr/model.hpp"
#include "swr/sim.hpp"
#include "swr/train.hpp"
#include "swr/uncertainty.hpp"

namespace swr {

// JSON report forms. Doubles are emitted with shortest round-trip precision,
// so serializing and re-reading a model reproduces it bit for bit.

nlohmann::json kernel_to_json(const WindowKernel& kernel);

nlohmann::json model_to_json(const SwrModel& model);
SwrModel model_from_json(const nlohmann::json& j);

nlohmann::json autocorr_to_json(const AutocorrInfo& info);
nlohmann::json uncertainty_to_json(const UncertaintyReport& report);
nlohmann::json fit_report_to_json(const FitReport& report);
nlohmann::json scores_to_json(const EvalScores& scores);

nlohmann::json study_summary_json(const StudyReport& report);
std::string study_csv(const StudyReport& report);

// Fixed-width console table for a fit report (iterations plus the selection).
std::string fit_summary_table(const FitReport& report);
// Metric table in the R2 / KGE / RMSE layout.
std::string scores_table(const EvalScores& scores);

}  // namespace swr
