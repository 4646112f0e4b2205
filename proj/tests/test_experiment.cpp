#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "dogc/experiment.hpp"

using namespace dogc;

namespace {

Json strip_times(Json j)
{
  if (j.is_object()) {
    j.erase("wall_time");
    for (auto& [key, value] : j.items()) value = strip_times(value);
  } else if (j.is_array()) {
    for (auto& value : j) value = strip_times(value);
  }
  return j;
}

ExperimentConfig moon_config()
{
  return parse_config(Json::parse(R"({
    "dataset": {"synthetic": {"kind": "two_moon", "n": 120, "noise": 0.05, "seed": 3}},
    "normalize": "none", "method": "dogc", "restarts": 4, "seed": 11
  })"));
}

int run_cli(const std::string& args)
{
  const std::string cmd = std::string(DOGC_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

}  // namespace

TEST(Config, round_trip)
{
  const Json j = Json::parse(R"({
    "dataset": {"builtin": "wine"}, "normalize": "minmax", "method": "dogcos",
    "clusters": 3, "hyper": {"k": 7, "alpha": 0.5, "p": 1.0, "sigma": 2.0},
    "restarts": 5, "seed": 9, "selection": "best_objective",
    "split": {"ratio": 0.6, "seed": 2}, "grid": {"alpha": [0.1, 1.0]}, "workers": 2
  })");
  const ExperimentConfig cfg = parse_config(j);
  EXPECT_EQ(cfg.method, Method::dogcos);
  EXPECT_EQ(cfg.hyper.k, 7);
  ASSERT_TRUE(cfg.split.has_value());
  EXPECT_DOUBLE_EQ(cfg.split->ratio, 0.6);
  EXPECT_EQ(to_json(parse_config(to_json(cfg))), to_json(cfg));
}

TEST(Config, rejects_unknown_keys_and_bad_values)
{
  EXPECT_THROW(parse_config(Json::parse(R"({"dataset": {"builtin": "wine"}, "alpah": 1})")), ConfigError);
  EXPECT_THROW(parse_config(Json::parse(R"({"dataset": {"builtin": "wine"}, "hyper": {"q": 1}})")), ConfigError);
  EXPECT_THROW(parse_config(Json::parse(R"({"dataset": {"builtin": "iris"}})")), ConfigError);
  EXPECT_THROW(parse_config(Json::parse(R"({"dataset": {"builtin": "wine"}, "restarts": "many"})")), ConfigError);
  EXPECT_THROW(parse_config(Json::parse(R"({"dataset": {"builtin": "wine"}, "hyper": {"p": 3}})")), ConfigError);
  EXPECT_THROW(parse_config(Json::parse(R"({"method": "dogc"})")), ConfigError);
  EXPECT_THROW(parse_config(Json::parse(R"({"dataset": {"builtin": "wine", "path": "x.csv"}})")), ConfigError);
}

TEST(Experiment, report_is_reproducible_across_worker_counts)
{
  ExperimentConfig cfg = moon_config();
  const RunReport a = run_experiment(cfg);
  cfg.workers = 3;
  const RunReport b = run_experiment(cfg);
  Json ja = strip_times(report_json(a));
  Json jb = strip_times(report_json(b));
  ja["config"].erase("workers");
  jb["config"].erase("workers");
  EXPECT_EQ(ja.dump(), jb.dump());
  EXPECT_EQ(traces_csv(a), traces_csv(b));
  EXPECT_DOUBLE_EQ(a.best().scores.acc, 1.0);
}

TEST(Experiment, grid_points_share_restart_seeds)
{
  ExperimentConfig cfg = moon_config();
  cfg.restarts = 2;
  cfg.grid["alpha"] = {0.01, 0.1};
  const RunReport r = run_experiment(cfg);
  ASSERT_EQ(r.restarts.size(), 4u);
  EXPECT_EQ(r.restarts[0].seed, r.restarts[2].seed);
  EXPECT_EQ(r.restarts[1].seed, r.restarts[3].seed);
  EXPECT_NE(r.restarts[0].seed, r.restarts[1].seed);
}

TEST(Experiment, out_of_sample_reports_test_scores)
{
  ExperimentConfig cfg = moon_config();
  cfg.method = Method::dogcos;
  cfg.split = SplitConfig{0.5, 1};
  const RunReport r = run_out_of_sample(cfg);
  ASSERT_TRUE(r.best().test_scores.has_value());
  EXPECT_GT(r.best().test_scores->acc, 0.5);
  cfg.method = Method::kmeans;
  EXPECT_THROW(run_out_of_sample(cfg), ConfigError);
}

TEST(Experiment, sweep_rows_per_method_and_value)
{
  ExperimentConfig cfg = moon_config();
  cfg.restarts = 1;
  const auto rows = emit_sweep(cfg, "noise", {0.02, 0.05}, {Method::dogc, Method::kmeans});
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0].param, "noise");
  EXPECT_NE(sweep_csv(rows).find("kmeans"), std::string::npos);
  EXPECT_THROW(emit_sweep(cfg, "zeta", {1.0}), ConfigError);
}

TEST(Experiment, baselines_run_through_the_protocol)
{
  ExperimentConfig cfg = moon_config();
  cfg.restarts = 2;
  for (Method m : {Method::kmeans, Method::spectral, Method::dogc1, Method::dogc2}) {
    cfg.method = m;
    const RunReport r = run_experiment(cfg);
    ASSERT_GE(r.selected, 0) << to_string(m);
    EXPECT_EQ(r.best().labels.size(), 120u) << to_string(m);
    EXPECT_GE(r.best().scores.acc, 0.5) << to_string(m);
  }
}

TEST(Experiment, relaxed_labels_do_not_beat_discrete_labels_on_wine)
{
  ExperimentConfig cfg;
  cfg.dataset.builtin = "wine";
  cfg.restarts = 10;
  cfg.method = Method::dogcos;
  const double discrete = run_experiment(cfg).best().scores.acc;
  cfg.method = Method::dogc1;
  const double relaxed = run_experiment(cfg).best().scores.acc;
  EXPECT_LE(relaxed, discrete);
}

TEST(Experiment, fixed_graph_does_not_separate_two_moon)
{
  ExperimentConfig cfg = moon_config();
  cfg.method = Method::dogc2;
  EXPECT_LT(run_experiment(cfg).best().scores.acc, 1.0);
  cfg.method = Method::dogcos;
  cfg.hyper.beta = 1e-4;
  EXPECT_DOUBLE_EQ(run_experiment(cfg).best().scores.acc, 1.0);
}

TEST(Experiment, write_report_creates_files)
{
  const auto dir = std::filesystem::temp_directory_path() / "dogc_report_test";
  std::filesystem::remove_all(dir);
  ExperimentConfig cfg = moon_config();
  cfg.restarts = 1;
  write_report(run_experiment(cfg), dir);
  EXPECT_TRUE(std::filesystem::exists(dir / "report.json"));
  EXPECT_TRUE(std::filesystem::exists(dir / "traces.csv"));
  std::ifstream in(dir / "report.json");
  const Json j = Json::parse(in);
  EXPECT_EQ(j.at("config").at("method"), "dogc");
  std::filesystem::remove_all(dir);
}

TEST(Cli, exit_codes)
{
  EXPECT_EQ(run_cli("cluster --synthetic two_moon --n 60 --restarts 1"), 0);
  EXPECT_EQ(run_cli("cluster --synthetic two_moon --restarts 0"), 2);
  EXPECT_EQ(run_cli("cluster --dataset iris"), 2);
  EXPECT_EQ(run_cli("cluster --dataset vote"), 3);
  EXPECT_EQ(run_cli("cluster --data /nonexistent/file.csv"), 3);
  EXPECT_EQ(run_cli("cluster --synthetic two_moon --n 60 --clusters 61"), 2);
  EXPECT_EQ(run_cli("datasets verify"), 0);
  EXPECT_EQ(run_cli("datasets list"), 0);
}
