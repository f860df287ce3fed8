#include "swr/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "swr/csv.hpp"
#include "swr/metrics.hpp"
#include "swr/serialize.hpp"
#include "swr/sim.hpp"
#include "swr/train.hpp"
#include "swr/uncertainty.hpp"

namespace swr {

namespace {

namespace fs = std::filesystem;

struct DataOptions {
  std::string time_col = "time";
  std::string input_col = "x";
  std::string target_col = "y";
  std::string delimiter = ",";
  bool no_header = false;

  CsvSpec spec() const {
    CsvSpec s;
    s.time_col = time_col;
    s.input_col = input_col;
    s.target_col = target_col;
    s.delimiter = delimiter.empty() ? ',' : delimiter[0];
    s.header = !no_header;
    return s;
  }
};

void add_data_options(CLI::App* cmd, DataOptions& opts) {
  cmd->add_option("--time-col", opts.time_col,
                  "Time column name; pass an empty string if there is none");
  cmd->add_option("--input-col", opts.input_col, "Input (rainfall) column name");
  cmd->add_option("--target-col", opts.target_col, "Target (streamflow) column name");
  cmd->add_option("--delimiter", opts.delimiter, "Field delimiter");
  cmd->add_flag("--no-header", opts.no_header,
                "Treat all rows as data; columns are positional ([time,] x [, y])");
}

struct FitOptions {
  int k_max = 3;
  std::string criterion = "bic";
  std::string loss = "nll";
  bool intercept = false;
};

void add_fit_options(CLI::App* cmd, FitOptions& opts) {
  cmd->add_option("--k-max", opts.k_max, "Maximum number of windows")->check(CLI::PositiveNumber);
  cmd->add_option("--criterion", opts.criterion, "Model selection criterion")
      ->check(CLI::IsMember({"aic", "bic"}));
  cmd->add_option("--loss", opts.loss, "Training loss")->check(CLI::IsMember({"nll", "rmse"}));
  cmd->add_flag("--intercept", opts.intercept, "Fit an intercept term");
}

TrainConfig to_train_config(const FitOptions& opts) {
  TrainConfig cfg;
  cfg.k_max = opts.k_max;
  cfg.criterion = opts.criterion == "aic" ? Criterion::aic : Criterion::bic;
  cfg.loss = opts.loss == "rmse" ? Loss::rmse : Loss::nll;
  cfg.intercept = opts.intercept;
  return cfg;
}

fs::path prepare_out_dir(const std::string& out_dir) {
  fs::path dir(out_dir);
  fs::create_directories(dir);
  return dir;
}

void write_json(const fs::path& path, const nlohmann::json& j) {
  write_text_file(path.string(), j.dump(2) + "\n");
}

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CsvError(path, 0, "-", "cannot open file");
  nlohmann::json j;
  in >> j;
  return j;
}

TimeSeriesPair to_pair(const LoadedDataset& data) {
  TimeSeriesPair pair;
  pair.x = data.x;
  pair.y = data.y;
  return pair;
}

int cmd_fit(const std::string& data_path, const DataOptions& data_opts,
            const FitOptions& fit_opts, double split, bool autocorr, int max_ar_order,
            double dw_alpha, int n_boot, std::uint64_t seed, bool uncertainty,
            const std::string& out_dir) {
  const LoadedDataset file = read_dataset_csv(data_path, data_opts.spec(), true);
  const TimeSeriesPair full = to_pair(file);
  const TrainConfig cfg = to_train_config(fit_opts);

  if (!(split > 0.0 && split <= 1.0)) {
    throw std::invalid_argument("fit: --split must lie in (0, 1]");
  }
  const std::size_t split_at =
      split < 1.0 ? static_cast<std::size_t>(std::floor(split * full.x.size()))
                  : full.x.size();
  TimeSeriesPair data;
  data.x.assign(full.x.begin(), full.x.begin() + static_cast<long>(split_at));
  data.y.assign(full.y.begin(), full.y.begin() + static_cast<long>(split_at));

  FitReport report = autocorr
                         ? fit_with_autocorr(data, cfg, max_ar_order, dw_alpha, n_boot, seed)
                         : fit(data, cfg);
  if (uncertainty) {
    // standard errors belong to the data the model was fitted on
    TimeSeriesPair fit_data = data;
    if (report.autocorr && report.autocorr->order > 0) {
      ArModel ar;
      ar.order = report.autocorr->order;
      ar.phi = report.autocorr->phi;
      ar.innovation_sd = report.autocorr->innovation_sd;
      fit_data.x = cochrane_orcutt_transform(data.x, ar);
      fit_data.y = cochrane_orcutt_transform(data.y, ar);
    }
    report.uncertainty = observed_information(report.final_model, fit_data);
  }

  const fs::path dir = prepare_out_dir(out_dir);
  write_json(dir / "model.json", model_to_json(report.final_model));
  write_json(dir / "fit_report.json", fit_report_to_json(report));
  if (report.uncertainty) {
    write_json(dir / "uncertainty.json", uncertainty_to_json(*report.uncertainty));
  }
  std::cout << fit_summary_table(report);
  if (split_at < full.x.size()) {
    // held-out scores over the trailing part, with the full history available
    const Prediction pred = predict(report.final_model, full.x);
    const std::size_t from = std::max(pred.first_valid, split_at);
    const std::span<const double> obs(full.y.data() + from, full.y.size() - from);
    const std::span<const double> est(pred.values.data() + from, full.y.size() - from);
    const EvalScores scores = evaluate(obs, est);
    write_json(dir / "test_scores.json", scores_to_json(scores));
    std::cout << "held-out scores (last " << full.x.size() - split_at << " points):\n"
              << scores_table(scores);
  }
  if (report.autocorr) {
    const AutocorrInfo& info = *report.autocorr;
    std::cout << "durbin-watson: d=" << info.dw_before.statistic
              << " p=" << info.dw_before.p_value;
    if (info.order > 0) {
      std::cout << " -> AR(" << info.order << ") transform, refit d="
                << info.dw_after.statistic << " p=" << info.dw_after.p_value;
    }
    std::cout << '\n';
  }
  return 0;
}

int cmd_predict(const std::string& model_path, const std::string& data_path,
                const DataOptions& data_opts, const std::string& out_dir) {
  const SwrModel model = model_from_json(read_json(model_path));
  const LoadedDataset file = read_dataset_csv(data_path, data_opts.spec(), false);
  const Prediction pred = predict(model, file.x);
  const fs::path dir = prepare_out_dir(out_dir);
  write_predictions_csv((dir / "predictions.csv").string(), file, pred);
  std::cout << "predictions.csv: " << pred.valid_count() << " of " << file.x.size()
            << " points predictable\n";
  return 0;
}

int cmd_simulate(int k, std::uint64_t truth_seed, double alpha, const std::string& process,
                 double phi, std::size_t length, double spike_rate, double spike_scale,
                 std::uint64_t rain_seed, double min_delta_gap, std::uint64_t seed,
                 const std::string& input_csv, const DataOptions& data_opts,
                 const std::string& out_dir) {
  std::vector<double> input;
  if (!input_csv.empty()) {
    input = read_dataset_csv(input_csv, data_opts.spec(), false).x;
    length = input.size();
  } else {
    RainfallSpec rain;
    rain.length = length;
    rain.spike_rate = spike_rate;
    rain.spike_scale = spike_scale;
    rain.seed = rain_seed;
    input = synthetic_rainfall(rain);
  }

  SimSetup setup;
  setup.truth = sample_truth(k, truth_seed, min_delta_gap);
  setup.alpha = alpha;
  setup.process = process == "ar1" ? ErrorProcess::ar1 : ErrorProcess::iid;
  setup.phi = phi;
  setup.seed = seed;

  const SimResult sim = generate(setup, input);

  const fs::path dir = prepare_out_dir(out_dir);
  write_dataset_csv((dir / "dataset.csv").string(), sim.data.x, sim.data.y);
  nlohmann::json truth{{"model", model_to_json(sim.truth)},
                       {"alpha", alpha},
                       {"process", process},
                       {"noise_sd", sim.noise_sd},
                       {"first_valid", sim.first_valid},
                       {"seed", seed},
                       {"truth_seed", truth_seed},
                       {"rain_seed", rain_seed}};
  if (setup.process == ErrorProcess::ar1) truth["phi"] = phi;
  write_json(dir / "truth.json", truth);
  std::cout << "dataset.csv: " << length << " points, k=" << k << ", alpha=" << alpha
            << ", rho=" << sim.noise_sd << '\n';
  return 0;
}

int cmd_evaluate(const std::string& model_path, const std::string& data_path,
                 const DataOptions& data_opts, const std::string& out_dir) {
  const SwrModel model = model_from_json(read_json(model_path));
  const LoadedDataset file = read_dataset_csv(data_path, data_opts.spec(), true);
  const Prediction pred = predict(model, file.x);
  const std::span<const double> obs(file.y.data() + pred.first_valid,
                                    file.y.size() - pred.first_valid);
  const std::span<const double> est(pred.values.data() + pred.first_valid,
                                    pred.values.size() - pred.first_valid);
  const EvalScores scores = evaluate(obs, est);
  const fs::path dir = prepare_out_dir(out_dir);
  write_json(dir / "scores.json", scores_to_json(scores));
  std::cout << scores_table(scores);
  return 0;
}

int cmd_study(StudyGridConfig cfg, const std::string& process, const std::string& out_dir) {
  cfg.process = process == "ar1" ? ErrorProcess::ar1 : ErrorProcess::iid;
  const StudyReport report = run_study(cfg);
  const fs::path dir = prepare_out_dir(out_dir);
  write_text_file((dir / "study.csv").string(), study_csv(report));
  write_json(dir / "study_summary.json", study_summary_json(report));
  int failures = 0;
  for (const CellResult& c : report.cells) failures += c.failed ? 1 : 0;
  std::cout << "study: " << report.cells.size() << " cells, " << failures << " failures\n";
  for (const AlphaSummary& s : summarize_by_alpha(report)) {
    std::cout << "alpha=" << s.alpha << "  mean R2=" << s.mean_r2
              << "  mean KGE=" << s.mean_kge << "  mean overlap=" << s.mean_overlap << '\n';
  }
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"Sliding-windows regression for lagged input/target time series"};
  app.require_subcommand(1);

  // fit ----------------------------------------------------------------
  auto* fit_cmd = app.add_subcommand("fit", "Fit a model to a CSV dataset");
  std::string fit_data;
  fit_cmd->add_option("data", fit_data, "Dataset CSV")->required();
  DataOptions fit_data_opts;
  add_data_options(fit_cmd, fit_data_opts);
  FitOptions fit_opts;
  add_fit_options(fit_cmd, fit_opts);
  bool autocorr = false;
  int max_ar_order = 3;
  double dw_alpha = 0.01;
  int n_boot = 1000;
  std::uint64_t fit_seed = 0;
  bool uncertainty = false;
  double fit_split = 0.75;
  std::string fit_out = ".";
  fit_cmd->add_option("--split", fit_split,
                      "Fit on the leading fraction; score the rest (1 = use all)");
  fit_cmd->add_flag("--autocorr", autocorr,
                    "Apply the autocorrelation correction loop when needed");
  fit_cmd->add_option("--max-ar-order", max_ar_order, "Highest AR order to try")
      ->check(CLI::PositiveNumber);
  fit_cmd->add_option("--dw-alpha", dw_alpha, "Durbin-Watson rejection level");
  fit_cmd->add_option("--n-boot", n_boot, "Permutations for the Durbin-Watson p-value")
      ->check(CLI::PositiveNumber);
  fit_cmd->add_option("--seed", fit_seed, "Seed for the Durbin-Watson permutations");
  fit_cmd->add_flag("--uncertainty", uncertainty, "Also write standard errors");
  fit_cmd->add_option("--out-dir", fit_out, "Output directory");

  // predict ------------------------------------------------------------
  auto* predict_cmd = app.add_subcommand("predict", "Predict a series with a fitted model");
  std::string predict_model, predict_data, predict_out = ".";
  predict_cmd->add_option("model", predict_model, "Model JSON")->required();
  predict_cmd->add_option("data", predict_data, "Dataset CSV (target optional)")->required();
  DataOptions predict_data_opts;
  add_data_options(predict_cmd, predict_data_opts);
  predict_cmd->add_option("--out-dir", predict_out, "Output directory");

  // simulate -----------------------------------------------------------
  auto* sim_cmd = app.add_subcommand("simulate", "Generate a synthetic dataset");
  int sim_k = 1;
  std::uint64_t truth_seed = 1, rain_seed = 1, sim_seed = 0;
  double sim_alpha = 0.0, sim_phi = 0.5, spike_rate = 0.3, spike_scale = 1.0;
  double min_delta_gap = 0.5;
  std::size_t sim_length = 2000;
  std::string sim_process = "iid", sim_out = ".", sim_input;
  DataOptions sim_data_opts;
  sim_cmd->add_option("--k", sim_k, "Ground-truth number of windows")->check(CLI::PositiveNumber);
  sim_cmd->add_option("--input-csv", sim_input,
                      "Drive the simulation with this input series instead of synthetic rain");
  add_data_options(sim_cmd, sim_data_opts);
  sim_cmd->add_option("--truth-seed", truth_seed, "Seed for the ground-truth draw");
  sim_cmd->add_option("--alpha", sim_alpha, "Relative noise level");
  sim_cmd->add_option("--process", sim_process, "Error process")
      ->check(CLI::IsMember({"iid", "ar1"}));
  sim_cmd->add_option("--phi", sim_phi, "AR(1) coefficient");
  sim_cmd->add_option("--length", sim_length, "Series length")->check(CLI::PositiveNumber);
  sim_cmd->add_option("--spike-rate", spike_rate, "Rainfall spike probability per step");
  sim_cmd->add_option("--spike-scale", spike_scale, "Mean rainfall spike magnitude");
  sim_cmd->add_option("--rain-seed", rain_seed, "Seed for the rainfall draw");
  sim_cmd->add_option("--min-delta-gap", min_delta_gap,
                      "Smallest allowed gap between ground-truth window locations");
  sim_cmd->add_option("--seed", sim_seed, "Seed for the noise draw");
  sim_cmd->add_option("--out-dir", sim_out, "Output directory");

  // evaluate -----------------------------------------------------------
  auto* eval_cmd = app.add_subcommand("evaluate", "Score a fitted model on a dataset");
  std::string eval_model, eval_data, eval_out = ".";
  eval_cmd->add_option("model", eval_model, "Model JSON")->required();
  eval_cmd->add_option("data", eval_data, "Dataset CSV")->required();
  DataOptions eval_data_opts;
  add_data_options(eval_cmd, eval_data_opts);
  eval_cmd->add_option("--out-dir", eval_out, "Output directory");

  // study --------------------------------------------------------------
  auto* study_cmd = app.add_subcommand("study", "Run a simulation study grid");
  StudyGridConfig grid;
  FitOptions study_fit_opts;
  std::string study_process = "iid", study_out = ".";
  study_cmd->add_option("--k-values", grid.k_values, "Ground-truth window counts");
  study_cmd->add_option("--setups-per-k", grid.setups_per_k, "Sampled setups per k")
      ->check(CLI::PositiveNumber);
  study_cmd->add_option("--alphas", grid.alphas, "Noise levels");
  study_cmd->add_option("--length", grid.length, "Series length")->check(CLI::PositiveNumber);
  study_cmd->add_option("--split", grid.split, "Training fraction");
  study_cmd->add_option("--seed", grid.seed, "Base seed");
  study_cmd->add_option("--process", study_process, "Error process")
      ->check(CLI::IsMember({"iid", "ar1"}));
  study_cmd->add_option("--phi", grid.phi, "AR(1) coefficient");
  study_cmd->add_option("--min-delta-gap", grid.min_delta_gap,
                        "Smallest allowed gap between ground-truth window locations");
  study_cmd->add_option("--spike-rate", grid.spike_rate, "Rainfall spike probability");
  study_cmd->add_option("--spike-scale", grid.spike_scale, "Mean spike magnitude");
  add_fit_options(study_cmd, study_fit_opts);
  study_cmd->add_flag("--autocorr", grid.use_autocorr,
                      "Fit through the autocorrelation correction loop");
  study_cmd->add_option("--max-ar-order", grid.max_ar_order, "Highest AR order to try");
  study_cmd->add_option("--dw-alpha", grid.dw_alpha, "Durbin-Watson rejection level");
  study_cmd->add_option("--n-boot", grid.n_boot, "Durbin-Watson permutations");
  study_cmd->add_option("--threads", grid.threads, "Worker threads (0 = auto)");
  study_cmd->add_option("--out-dir", study_out, "Output directory");

  std::vector<const char*> argv;
  argv.push_back("swr");
  for (const std::string& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (fit_cmd->parsed()) {
      return cmd_fit(fit_data, fit_data_opts, fit_opts, fit_split, autocorr,
                     max_ar_order, dw_alpha, n_boot, fit_seed, uncertainty, fit_out);
    }
    if (predict_cmd->parsed()) {
      return cmd_predict(predict_model, predict_data, predict_data_opts, predict_out);
    }
    if (sim_cmd->parsed()) {
      return cmd_simulate(sim_k, truth_seed, sim_alpha, sim_process, sim_phi, sim_length,
                          spike_rate, spike_scale, rain_seed, min_delta_gap, sim_seed,
                          sim_input, sim_data_opts, sim_out);
    }
    if (eval_cmd->parsed()) {
      return cmd_evaluate(eval_model, eval_data, eval_data_opts, eval_out);
    }
    if (study_cmd->parsed()) {
      grid.fit = to_train_config(study_fit_opts);
      return cmd_study(grid, study_process, study_out);
    }
  } catch (const CsvError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 2;
  } catch (const TrainError& e) {
    std::cerr << "training failed: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 1;
}

}  // namespace swr
