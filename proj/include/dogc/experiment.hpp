#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "dogc/data.hpp"
#include "dogc/metrics.hpp"
#include "dogc/solver.hpp"

namespace dogc {

using Json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "0.1.0";

enum class Method { dogc, dogcos, dogc1, dogc2, kmeans, spectral };
enum class Selection { best_acc, best_objective };

Method parse_method(const std::string& name);
std::string to_string(Method method);
Selection parse_selection(const std::string& name);
std::string to_string(Selection selection);

struct DatasetSource {
  std::optional<std::string> builtin;
  std::optional<DatasetSpec> file;
  std::optional<SyntheticConfig> synthetic;
};

struct HyperConfig {
  int k = 0;
  Eigen::Index m = 0;
  double alpha = 1e-2;
  double beta = 1e-2;
  double gamma = 1e-2;
  double p = 1.25;
  std::optional<double> lambda0;
  std::optional<double> sigma;  // Gaussian bandwidth for spectral / DOGC-II
};

struct SplitConfig {
  double ratio = 0.5;
  std::uint64_t seed = 0;
};

struct ExperimentConfig {
  DatasetSource dataset;
  Normalize normalize = Normalize::zscore;
  Method method = Method::dogc;
  int clusters = 0;  // 0: number of ground-truth classes
  HyperConfig hyper;
  int max_sweeps = 50;
  double tol = 1e-6;
  int restarts = 10;
  std::uint64_t seed = 0;
  Selection selection = Selection::best_acc;
  std::optional<SplitConfig> split;
  /// Optional hyperparameter grid (alpha, beta, gamma, p, k); every grid point
  /// runs the full restart protocol.
  std::map<std::string, std::vector<double>> grid;
  int workers = 1;
  std::string output_dir;
};

/// Strict parser: unknown keys and wrong types raise ConfigError.
ExperimentConfig parse_config(const Json& j);
ExperimentConfig load_config(const std::filesystem::path& path);
Json to_json(const ExperimentConfig& config);

/// Loads or generates the configured data set (before normalisation of a
/// split, which is applied to the full data).
FeatureMatrix load_experiment_data(const ExperimentConfig& config, Warnings* warnings = nullptr);

struct RestartRecord {
  int index = 0;
  int grid_point = 0;
  std::map<std::string, double> params;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  Scores scores;
  std::optional<Scores> test_scores;
  double objective = 0.0;
  int sweeps = 0;
  bool converged = false;
  bool rank_satisfied = false;
  double wall_time = 0.0;
  std::vector<SweepRecord> trace;
  std::vector<int> labels;
  Warnings warnings;
};

struct RunReport {
  ExperimentConfig config;
  std::vector<RestartRecord> restarts;
  int selected = -1;
  int selected_by_objective = -1;
  double wall_time = 0.0;
  Warnings warnings;

  const RestartRecord& best() const { return restarts.at(static_cast<std::size_t>(selected)); }
};

/// Runs every (grid point, restart) job, in parallel when `workers` > 1.
/// Results are ordered by job index whatever the completion order.
RunReport run_experiment(const ExperimentConfig& config);

/// Fits on the training part of a stratified split and predicts the test part
/// with the learned predictor. Requires method dogcos.
RunReport run_out_of_sample(const ExperimentConfig& config);

struct SweepRow {
  std::string method;
  std::string param;
  double value = 0.0;
  Scores scores;
};

/// One row per (method, value). `param` is alpha, beta, gamma, p, k or noise
/// (synthetic data only).
std::vector<SweepRow> emit_sweep(const ExperimentConfig& config, const std::string& param,
                                 const std::vector<double>& values,
                                 const std::vector<Method>& methods = {});

Json report_json(const RunReport& report);
std::string traces_csv(const RunReport& report);
std::string sweep_csv(const std::vector<SweepRow>& rows);

/// Writes report.json and traces.csv into `dir` (created when missing).
void write_report(const RunReport& report, const std::filesystem::path& dir);

}  // namespace dogc
