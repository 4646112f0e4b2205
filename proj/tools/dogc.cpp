// Command-line front end: cluster, oos, sweep and datasets verify.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "dogc/experiment.hpp"

namespace {

using dogc::Json;

enum Exit { kOk = 0, kConfig = 2, kData = 3, kSolver = 4 };

struct Flags {
  std::string config;
  std::string dataset, data, label_column, synthetic;
  int n = 0;
  double noise = 0.0, separation = 0.0;
  std::uint64_t data_seed = 0;
  std::string normalize, method, selection, output_dir;
  int clusters = 0, k = 0, m = 0, max_sweeps = 0, restarts = 0, workers = 0;
  double alpha = 0, beta = 0, gamma = 0, p = 0, lambda0 = 0, sigma = 0, tol = 0;
  std::uint64_t seed = 0;
  double split_ratio = 0.0;
  std::uint64_t split_seed = 0;
};

void add_experiment_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "JSON experiment config; other flags override it");
  cmd->add_option("--dataset", f.dataset, "builtin dataset name");
  cmd->add_option("--data", f.data, "CSV file");
  cmd->add_option("--label-column", f.label_column, "label column name or index (CSV)");
  cmd->add_option("--synthetic", f.synthetic, "two_moon | two_gaussian | multi_cluster_36");
  cmd->add_option("--n", f.n, "synthetic sample count");
  cmd->add_option("--noise", f.noise, "synthetic noise standard deviation");
  cmd->add_option("--separation", f.separation, "two_gaussian centre distance");
  cmd->add_option("--data-seed", f.data_seed, "synthetic generator seed");
  cmd->add_option("--normalize", f.normalize, "none | zscore | minmax");
  cmd->add_option("--method", f.method, "dogc | dogcos | dogc1 | dogc2 | kmeans | spectral");
  cmd->add_option("--clusters,-c", f.clusters, "cluster count (default: number of classes)");
  cmd->add_option("--k", f.k, "neighbours per sample (0: n/10)");
  cmd->add_option("--m", f.m, "projection width (0: c)");
  cmd->add_option("--alpha", f.alpha);
  cmd->add_option("--beta", f.beta);
  cmd->add_option("--gamma", f.gamma);
  cmd->add_option("--p", f.p, "l2,p loss exponent");
  cmd->add_option("--lambda0", f.lambda0, "initial rank weight (default: mean xi)");
  cmd->add_option("--sigma", f.sigma, "Gaussian bandwidth for spectral / dogc2");
  cmd->add_option("--max-sweeps", f.max_sweeps);
  cmd->add_option("--tol", f.tol);
  cmd->add_option("--restarts", f.restarts);
  cmd->add_option("--seed", f.seed);
  cmd->add_option("--selection", f.selection, "best_acc | best_objective");
  cmd->add_option("--workers,-j", f.workers, "parallel restarts");
  cmd->add_option("--output-dir,-o", f.output_dir, "write report.json and traces.csv here");
}

bool given(const CLI::App* cmd, const char* flag) {
  const CLI::Option* opt = cmd->get_option_no_throw(flag);
  return opt != nullptr && opt->count() > 0;
}

template <typename T>
void overlay(const CLI::App* cmd, const char* flag, Json& target, const char* key, const T& value) {
  if (given(cmd, flag)) target[key] = value;
}

Json build_config(const CLI::App* cmd, const Flags& f) {
  Json j = Json::object();
  if (!f.config.empty()) {
    std::ifstream in(f.config);
    if (!in) throw dogc::ConfigError("cannot open config " + f.config);
    try {
      j = Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw dogc::ConfigError("config is not valid JSON: " + std::string(e.what()));
    }
  }
  const int sources = static_cast<int>(given(cmd, "--dataset")) +
                      static_cast<int>(given(cmd, "--data")) +
                      static_cast<int>(given(cmd, "--synthetic"));
  if (sources > 1) throw dogc::ConfigError("use only one of --dataset, --data, --synthetic");
  if (given(cmd, "--dataset")) j["dataset"] = Json{{"builtin", f.dataset}};
  if (given(cmd, "--data")) {
    j["dataset"] = Json{{"path", f.data}};
    overlay(cmd, "--label-column", j["dataset"], "label_column", f.label_column);
  }
  if (given(cmd, "--synthetic")) j["dataset"] = Json{{"synthetic", Json{{"kind", f.synthetic}}}};
  if (given(cmd, "--n") || given(cmd, "--noise") || given(cmd, "--separation") || given(cmd, "--data-seed")) {
    if (!j.contains("dataset") || !j["dataset"].contains("synthetic")) {
      throw dogc::ConfigError("--n, --noise, --separation and --data-seed need a synthetic dataset");
    }
    Json& s = j["dataset"]["synthetic"];
    overlay(cmd, "--n", s, "n", f.n);
    overlay(cmd, "--noise", s, "noise", f.noise);
    overlay(cmd, "--separation", s, "separation", f.separation);
    overlay(cmd, "--data-seed", s, "seed", f.data_seed);
  }
  overlay(cmd, "--normalize", j, "normalize", f.normalize);
  overlay(cmd, "--method", j, "method", f.method);
  overlay(cmd, "--clusters", j, "clusters", f.clusters);
  Json hyper = j.contains("hyper") ? j["hyper"] : Json::object();
  overlay(cmd, "--k", hyper, "k", f.k);
  overlay(cmd, "--m", hyper, "m", f.m);
  overlay(cmd, "--alpha", hyper, "alpha", f.alpha);
  overlay(cmd, "--beta", hyper, "beta", f.beta);
  overlay(cmd, "--gamma", hyper, "gamma", f.gamma);
  overlay(cmd, "--p", hyper, "p", f.p);
  overlay(cmd, "--lambda0", hyper, "lambda0", f.lambda0);
  overlay(cmd, "--sigma", hyper, "sigma", f.sigma);
  if (!hyper.empty()) j["hyper"] = hyper;
  overlay(cmd, "--max-sweeps", j, "max_sweeps", f.max_sweeps);
  overlay(cmd, "--tol", j, "tol", f.tol);
  overlay(cmd, "--restarts", j, "restarts", f.restarts);
  overlay(cmd, "--seed", j, "seed", f.seed);
  overlay(cmd, "--selection", j, "selection", f.selection);
  overlay(cmd, "--workers", j, "workers", f.workers);
  overlay(cmd, "--output-dir", j, "output_dir", f.output_dir);
  if (given(cmd, "--split-ratio") || given(cmd, "--split-seed")) {
    Json split = j.contains("split") ? j["split"] : Json::object();
    overlay(cmd, "--split-ratio", split, "ratio", f.split_ratio);
    overlay(cmd, "--split-seed", split, "seed", f.split_seed);
    j["split"] = split;
  }
  return j;
}

std::vector<double> parse_values(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw dogc::ConfigError("sweep value '" + item + "' is not a number");
    }
  }
  return out;
}

void print_summary(const dogc::RunReport& r) {
  const auto& b = r.best();
  std::printf("method %s, %zu runs, selected #%d (%s)\n", dogc::to_string(r.config.method).c_str(),
              r.restarts.size(), r.selected, dogc::to_string(r.config.selection).c_str());
  std::printf("  ACC %.4f  NMI %.4f  Purity %.4f  objective %.6g\n", b.scores.acc, b.scores.nmi,
              b.scores.purity, b.objective);
  if (b.test_scores) {
    std::printf("  test ACC %.4f  NMI %.4f  Purity %.4f\n", b.test_scores->acc, b.test_scores->nmi,
                b.test_scores->purity);
  }
  for (const auto& w : r.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
}

int run_report(const dogc::RunReport& r) {
  print_summary(r);
  if (!r.config.output_dir.empty()) {
    dogc::write_report(r, r.config.output_dir);
    std::printf("report written to %s\n", r.config.output_dir.c_str());
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete optimal graph clustering experiments"};
  app.require_subcommand(1);
  Flags f;

  auto* cluster = app.add_subcommand("cluster", "run the restart protocol on one dataset");
  add_experiment_flags(cluster, f);

  auto* oos = app.add_subcommand("oos", "fit on a stratified split and predict the held-out part");
  add_experiment_flags(oos, f);
  oos->add_option("--split-ratio", f.split_ratio, "training fraction (default 0.5)");
  oos->add_option("--split-seed", f.split_seed);

  auto* sweep = app.add_subcommand("sweep", "best metrics for each value of one parameter");
  add_experiment_flags(sweep, f);
  sweep->add_option("--split-ratio", f.split_ratio);
  sweep->add_option("--split-seed", f.split_seed);
  std::string param, values, methods, csv_out;
  sweep->add_option("--param", param, "alpha | beta | gamma | p | k | noise")->required();
  sweep->add_option("--values", values, "comma-separated values")->required();
  sweep->add_option("--methods", methods, "comma-separated methods (default: --method)");
  sweep->add_option("--csv", csv_out, "output CSV (default: stdout)");

  auto* datasets = app.add_subcommand("datasets", "inspect the shipped datasets");
  datasets->require_subcommand(1);
  std::string data_dir = dogc::default_data_dir().string();
  auto* verify = datasets->add_subcommand("verify", "check SHA-256 sums of the shipped CSVs");
  verify->add_option("--dir", data_dir, "data directory");
  auto* list = datasets->add_subcommand("list", "list the benchmark datasets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*cluster) return run_report(dogc::run_experiment(dogc::parse_config(build_config(cluster, f))));
    if (*oos) {
      Json j = build_config(oos, f);
      if (!j.contains("method")) j["method"] = "dogcos";
      return run_report(dogc::run_out_of_sample(dogc::parse_config(j)));
    }
    if (*sweep) {
      const dogc::ExperimentConfig cfg = dogc::parse_config(build_config(sweep, f));
      std::vector<dogc::Method> ms;
      if (!methods.empty()) {
        std::stringstream ss(methods);
        std::string item;
        while (std::getline(ss, item, ',')) ms.push_back(dogc::parse_method(item));
      }
      const std::string csv = dogc::sweep_csv(dogc::emit_sweep(cfg, param, parse_values(values), ms));
      if (csv_out.empty()) {
        std::cout << csv;
      } else {
        std::ofstream out(csv_out);
        if (!out) throw dogc::DataError("cannot write " + csv_out);
        out << csv;
      }
      return kOk;
    }
    if (*verify) {
      bool all = true;
      for (const auto& r : dogc::verify_checksums(data_dir)) {
        const char* status = r.actual.empty() ? "MISSING" : (r.ok ? "OK" : "MISMATCH");
        std::printf("%-14s %s\n", r.file.c_str(), status);
        all = all && r.ok;
      }
      return all ? kOk : kData;
    }
    if (*list) {
      std::printf("%-10s %6s %4s %3s  %s\n", "name", "n", "d", "c", "status");
      for (const auto& b : dogc::builtin_datasets()) {
        const bool present = std::filesystem::exists(dogc::default_data_dir() / b.file);
        std::printf("%-10s %6d %4d %3d  %s\n", b.name.c_str(), b.table_n, b.shipped_d, b.table_c,
                    present ? "shipped" : "not available");
      }
      return kOk;
    }
  } catch (const dogc::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfig;
  } catch (const dogc::DataError& e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return kData;
  } catch (const dogc::SolverError& e) {
    std::fprintf(stderr, "solver error: %s\n", e.what());
    return kSolver;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "solver error: %s\n", e.what());
    return kSolver;
  }
  return kOk;
}
