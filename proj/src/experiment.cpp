#include "dogc/experiment.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <exception>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "dogc/random.hpp"

namespace dogc {

namespace {

// --- JSON helpers ---------------------------------------------------------

void check_keys(const Json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

template <typename T>
T get(const Json& j, const std::string& key, const std::string& where) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(where + "." + key + " has the wrong type");
  }
}

template <typename T>
void read_opt(const Json& j, const std::string& key, const std::string& where, T& out) {
  if (j.contains(key)) out = get<T>(j, key, where);
}

template <typename T>
void read_opt(const Json& j, const std::string& key, const std::string& where, std::optional<T>& out) {
  if (j.contains(key) && !j.at(key).is_null()) out = get<T>(j, key, where);
}

std::string fmt_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

const std::set<std::string> kGridParams = {"alpha", "beta", "gamma", "p", "k"};

// --- jobs -----------------------------------------------------------------

HyperConfig with_params(HyperConfig h, const std::map<std::string, double>& params) {
  for (const auto& [name, v] : params) {
    if (name == "alpha") h.alpha = v;
    else if (name == "beta") h.beta = v;
    else if (name == "gamma") h.gamma = v;
    else if (name == "p") h.p = v;
    else if (name == "k") h.k = static_cast<int>(std::lround(v));
  }
  return h;
}

SolverOptions solver_options(const ExperimentConfig& cfg, const HyperConfig& h, int clusters,
                             int restart, std::uint64_t seed) {
  SolverOptions o;
  o.clusters = clusters;
  o.k = h.k;
  o.m = h.m;
  o.alpha = h.alpha;
  o.beta = h.beta;
  o.gamma = h.gamma;
  o.p = h.p;
  o.lambda0 = h.lambda0;
  o.affinity_sigma = h.sigma;
  o.max_sweeps = cfg.max_sweeps;
  o.tol = cfg.tol;
  o.seed = seed;
  o.restart = restart;
  if (cfg.method == Method::dogc1) o = ablation_variant(o, {true, false});
  if (cfg.method == Method::dogc2) o = ablation_variant(o, {false, true});
  return o;
}

Mode solver_mode(Method m) { return m == Method::dogc ? Mode::dogc : Mode::dogcos; }

struct JobInput {
  const FeatureMatrix* train;
  const FeatureMatrix* test;  // null unless out-of-sample
  int clusters;
};

RestartRecord run_job(const ExperimentConfig& cfg, const JobInput& in, int index, int grid_point,
                      const std::map<std::string, double>& params) {
  RestartRecord rec;
  rec.index = index;
  rec.grid_point = grid_point;
  rec.params = params;
  const int restart = cfg.restarts > 0 ? index % cfg.restarts : 0;
  rec.seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(restart));
  const HyperConfig h = with_params(cfg.hyper, params);
  const FeatureMatrix& x = *in.train;
  const auto start = std::chrono::steady_clock::now();

  if (cfg.method == Method::kmeans) {
    KMeansOptions km{1, 300, rec.seed};
    const KMeansResult r = kmeans(x.data, in.clusters, km);
    rec.labels = r.labels;
    rec.objective = r.wcss;
    rec.converged = true;
  } else if (cfg.method == Method::spectral) {
    const FixedAffinity a = gaussian_affinity(x, h.sigma);
    KMeansOptions km{10, 300, rec.seed};
    const SpectralResult r = spectral_clustering(a, in.clusters, km);
    rec.labels = r.labels;
    rec.objective = within_cluster_ss(r.embedding.transpose(), r.labels, in.clusters);
    rec.converged = true;
  } else {
    const SolverOptions o = solver_options(cfg, h, in.clusters, restart, rec.seed);
    ClusteringResult r = fit(x, solver_mode(cfg.method), o);
    rec.labels = r.labels;
    rec.objective = r.state.objective_trace.empty() ? 0.0 : r.state.objective_trace.back();
    rec.sweeps = r.sweeps;
    rec.converged = r.converged;
    rec.rank_satisfied = r.rank_satisfied;
    rec.trace = r.state.sweeps;
    rec.warnings = r.warnings;
    if (in.test != nullptr) {
      if (!r.state.P) throw SolverError("fit did not produce a predictor");
      const auto pred = predict_out_of_sample(*r.state.P, in.test->data);
      if (in.test->has_labels()) rec.test_scores = evaluate(pred, in.test->labels, &rec.warnings);
    }
  }
  if (x.has_labels()) rec.scores = evaluate(rec.labels, x.labels, &rec.warnings);
  rec.ok = true;
  rec.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

std::vector<std::map<std::string, double>> grid_points(const ExperimentConfig& cfg) {
  std::vector<std::map<std::string, double>> points(1);
  for (const auto& [name, values] : cfg.grid) {
    std::vector<std::map<std::string, double>> next;
    for (const auto& base : points) {
      for (double v : values) {
        auto p = base;
        p[name] = v;
        next.push_back(std::move(p));
      }
    }
    points = std::move(next);
  }
  return points;
}

RunReport execute(const ExperimentConfig& cfg, const FeatureMatrix& train, const FeatureMatrix* test) {
  if (cfg.restarts < 1) throw ConfigError("restarts must be positive");
  if (cfg.workers < 1) throw ConfigError("workers must be positive");
  const auto start = std::chrono::steady_clock::now();
  RunReport report;
  report.config = cfg;

  int clusters = cfg.clusters;
  if (clusters == 0) {
    if (!train.has_labels()) throw ConfigError("clusters must be given for unlabelled data");
    clusters = train.num_classes();
  }
  const JobInput input{&train, test, clusters};
  const auto points = grid_points(cfg);
  const int jobs = static_cast<int>(points.size()) * cfg.restarts;
  report.restarts.resize(static_cast<std::size_t>(jobs));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(jobs));

  std::atomic<int> next{0};
  auto worker = [&]() {
    for (int j = next++; j < jobs; j = next++) {
      const int point = j / cfg.restarts;
      try {
        report.restarts[j] = run_job(cfg, input, j, point, points[point]);
      } catch (const std::exception& e) {
        RestartRecord& rec = report.restarts[j];
        rec.index = j;
        rec.grid_point = point;
        rec.params = points[point];
        rec.seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(j % cfg.restarts));
        rec.error = e.what();
        errors[j] = std::current_exception();
      }
    }
  };
  const int threads = std::min(cfg.workers, jobs);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  int failed = 0;
  for (const auto& r : report.restarts) failed += r.ok ? 0 : 1;
  if (failed == jobs) std::rethrow_exception(errors.front());
  if (failed > 0) {
    report.warnings.push_back(std::to_string(failed) + " of " + std::to_string(jobs) +
                              " restarts failed");
  }

  const bool labelled = train.has_labels();
  for (std::size_t i = 0; i < report.restarts.size(); ++i) {
    const auto& r = report.restarts[i];
    if (!r.ok) continue;
    const int idx = static_cast<int>(i);
    if (report.selected_by_objective < 0 ||
        r.objective < report.restarts[report.selected_by_objective].objective) {
      report.selected_by_objective = idx;
    }
    if (labelled) {
      auto key = [&](const RestartRecord& x) {
        return x.test_scores ? x.test_scores->acc : x.scores.acc;
      };
      if (report.selected < 0 || key(r) > key(report.restarts[report.selected])) report.selected = idx;
    }
  }
  if (cfg.selection == Selection::best_objective || !labelled) {
    if (cfg.selection == Selection::best_acc) {
      report.warnings.push_back("no ground truth; selecting by objective");
    }
    report.selected = report.selected_by_objective;
  }
  report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

Json scores_json(const Scores& s) {
  return Json{{"acc", s.acc}, {"nmi", s.nmi}, {"purity", s.purity}};
}

}  // namespace

Method parse_method(const std::string& name) {
  if (name == "dogc") return Method::dogc;
  if (name == "dogcos") return Method::dogcos;
  if (name == "dogc1") return Method::dogc1;
  if (name == "dogc2") return Method::dogc2;
  if (name == "kmeans") return Method::kmeans;
  if (name == "spectral") return Method::spectral;
  throw ConfigError("unknown method '" + name + "' (dogc, dogcos, dogc1, dogc2, kmeans, spectral)");
}

std::string to_string(Method method) {
  switch (method) {
    case Method::dogc: return "dogc";
    case Method::dogcos: return "dogcos";
    case Method::dogc1: return "dogc1";
    case Method::dogc2: return "dogc2";
    case Method::kmeans: return "kmeans";
    case Method::spectral: return "spectral";
  }
  return "dogc";
}

Selection parse_selection(const std::string& name) {
  if (name == "best_acc") return Selection::best_acc;
  if (name == "best_objective") return Selection::best_objective;
  throw ConfigError("unknown selection '" + name + "' (best_acc, best_objective)");
}

std::string to_string(Selection selection) {
  return selection == Selection::best_acc ? "best_acc" : "best_objective";
}

ExperimentConfig parse_config(const Json& j) {
  check_keys(j, {"dataset", "normalize", "method", "clusters", "hyper", "max_sweeps", "tol",
                 "restarts", "seed", "selection", "split", "grid", "workers", "output_dir"},
             "config");
  ExperimentConfig cfg;
  if (!j.contains("dataset")) throw ConfigError("config.dataset is required");
  const Json& ds = j.at("dataset");
  check_keys(ds, {"builtin", "path", "name", "label_column", "delimiter", "header", "expected_n",
                  "expected_d", "expected_c", "synthetic"},
             "config.dataset");
  const int sources = static_cast<int>(ds.contains("builtin")) + static_cast<int>(ds.contains("path")) +
                      static_cast<int>(ds.contains("synthetic"));
  if (sources != 1) throw ConfigError("config.dataset needs exactly one of builtin, path, synthetic");
  if (ds.contains("builtin")) {
    if (ds.size() != 1) throw ConfigError("config.dataset.builtin takes no other keys");
    cfg.dataset.builtin = get<std::string>(ds, "builtin", "config.dataset");
    if (find_builtin(*cfg.dataset.builtin) == nullptr) {
      throw ConfigError("unknown builtin dataset '" + *cfg.dataset.builtin + "'");
    }
  } else if (ds.contains("path")) {
    DatasetSpec spec;
    spec.path = get<std::string>(ds, "path", "config.dataset");
    read_opt(ds, "name", "config.dataset", spec.name);
    read_opt(ds, "label_column", "config.dataset", spec.label_column);
    if (ds.contains("delimiter")) {
      const auto d = get<std::string>(ds, "delimiter", "config.dataset");
      if (d.size() != 1) throw ConfigError("config.dataset.delimiter must be one character");
      spec.delimiter = d[0];
    }
    read_opt(ds, "header", "config.dataset", spec.has_header);
    read_opt(ds, "expected_n", "config.dataset", spec.expected_n);
    read_opt(ds, "expected_d", "config.dataset", spec.expected_d);
    read_opt(ds, "expected_c", "config.dataset", spec.expected_c);
    cfg.dataset.file = spec;
  } else {
    if (ds.size() != 1) throw ConfigError("config.dataset.synthetic takes no other keys");
    const Json& s = ds.at("synthetic");
    check_keys(s, {"kind", "n", "noise", "separation", "seed"}, "config.dataset.synthetic");
    SyntheticConfig sc;
    if (!s.contains("kind")) throw ConfigError("config.dataset.synthetic.kind is required");
    sc.kind = parse_synthetic_kind(get<std::string>(s, "kind", "config.dataset.synthetic"));
    read_opt(s, "n", "config.dataset.synthetic", sc.n);
    read_opt(s, "noise", "config.dataset.synthetic", sc.noise);
    read_opt(s, "separation", "config.dataset.synthetic", sc.separation);
    read_opt(s, "seed", "config.dataset.synthetic", sc.seed);
    cfg.dataset.synthetic = sc;
  }
  if (j.contains("normalize")) cfg.normalize = parse_normalize(get<std::string>(j, "normalize", "config"));
  if (j.contains("method")) cfg.method = parse_method(get<std::string>(j, "method", "config"));
  read_opt(j, "clusters", "config", cfg.clusters);
  if (j.contains("hyper")) {
    const Json& h = j.at("hyper");
    check_keys(h, {"k", "m", "alpha", "beta", "gamma", "p", "lambda0", "sigma"}, "config.hyper");
    read_opt(h, "k", "config.hyper", cfg.hyper.k);
    read_opt(h, "m", "config.hyper", cfg.hyper.m);
    read_opt(h, "alpha", "config.hyper", cfg.hyper.alpha);
    read_opt(h, "beta", "config.hyper", cfg.hyper.beta);
    read_opt(h, "gamma", "config.hyper", cfg.hyper.gamma);
    read_opt(h, "p", "config.hyper", cfg.hyper.p);
    read_opt(h, "lambda0", "config.hyper", cfg.hyper.lambda0);
    read_opt(h, "sigma", "config.hyper", cfg.hyper.sigma);
  }
  read_opt(j, "max_sweeps", "config", cfg.max_sweeps);
  read_opt(j, "tol", "config", cfg.tol);
  read_opt(j, "restarts", "config", cfg.restarts);
  read_opt(j, "seed", "config", cfg.seed);
  if (j.contains("selection")) cfg.selection = parse_selection(get<std::string>(j, "selection", "config"));
  if (j.contains("split") && !j.at("split").is_null()) {
    const Json& s = j.at("split");
    check_keys(s, {"ratio", "seed"}, "config.split");
    SplitConfig sc;
    read_opt(s, "ratio", "config.split", sc.ratio);
    read_opt(s, "seed", "config.split", sc.seed);
    cfg.split = sc;
  }
  if (j.contains("grid")) {
    const Json& g = j.at("grid");
    check_keys(g, kGridParams, "config.grid");
    for (const auto& [name, values] : g.items()) {
      auto list = get<std::vector<double>>(g, name, "config.grid");
      if (list.empty()) throw ConfigError("config.grid." + name + " is empty");
      cfg.grid[name] = std::move(list);
    }
  }
  read_opt(j, "workers", "config", cfg.workers);
  read_opt(j, "output_dir", "config", cfg.output_dir);

  if (cfg.restarts < 1) throw ConfigError("config.restarts must be positive");
  if (cfg.workers < 1) throw ConfigError("config.workers must be positive");
  if (cfg.max_sweeps < 1) throw ConfigError("config.max_sweeps must be positive");
  if (cfg.clusters < 0) throw ConfigError("config.clusters must be non-negative");
  if (cfg.hyper.k < 0 || cfg.hyper.m < 0) throw ConfigError("config.hyper k and m must be non-negative");
  if (cfg.hyper.alpha < 0 || cfg.hyper.beta < 0 || cfg.hyper.gamma < 0) {
    throw ConfigError("config.hyper penalty weights must be non-negative");
  }
  if (!(cfg.hyper.p > 0.0 && cfg.hyper.p <= 2.0)) throw ConfigError("config.hyper.p must lie in (0, 2]");
  if (cfg.split && !(cfg.split->ratio > 0.0 && cfg.split->ratio < 1.0)) {
    throw ConfigError("config.split.ratio must lie in (0, 1)");
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

Json to_json(const ExperimentConfig& cfg) {
  Json j;
  Json ds;
  if (cfg.dataset.builtin) {
    ds["builtin"] = *cfg.dataset.builtin;
  } else if (cfg.dataset.file) {
    const DatasetSpec& s = *cfg.dataset.file;
    ds["path"] = s.path.string();
    if (!s.name.empty()) ds["name"] = s.name;
    if (!s.label_column.empty()) ds["label_column"] = s.label_column;
    ds["delimiter"] = std::string(1, s.delimiter);
    ds["header"] = s.has_header;
    if (s.expected_n) ds["expected_n"] = *s.expected_n;
    if (s.expected_d) ds["expected_d"] = *s.expected_d;
    if (s.expected_c) ds["expected_c"] = *s.expected_c;
  } else if (cfg.dataset.synthetic) {
    const SyntheticConfig& s = *cfg.dataset.synthetic;
    ds["synthetic"] = Json{{"kind", to_string(s.kind)}, {"n", s.n}, {"noise", s.noise},
                           {"separation", s.separation}, {"seed", s.seed}};
  }
  j["dataset"] = ds;
  j["normalize"] = to_string(cfg.normalize);
  j["method"] = to_string(cfg.method);
  j["clusters"] = cfg.clusters;
  Json h{{"k", cfg.hyper.k},         {"m", cfg.hyper.m},         {"alpha", cfg.hyper.alpha},
         {"beta", cfg.hyper.beta},   {"gamma", cfg.hyper.gamma}, {"p", cfg.hyper.p}};
  if (cfg.hyper.lambda0) h["lambda0"] = *cfg.hyper.lambda0;
  if (cfg.hyper.sigma) h["sigma"] = *cfg.hyper.sigma;
  j["hyper"] = h;
  j["max_sweeps"] = cfg.max_sweeps;
  j["tol"] = cfg.tol;
  j["restarts"] = cfg.restarts;
  j["seed"] = cfg.seed;
  j["selection"] = to_string(cfg.selection);
  if (cfg.split) j["split"] = Json{{"ratio", cfg.split->ratio}, {"seed", cfg.split->seed}};
  if (!cfg.grid.empty()) {
    Json g = Json::object();
    for (const auto& [name, values] : cfg.grid) g[name] = values;
    j["grid"] = g;
  }
  j["workers"] = cfg.workers;
  if (!cfg.output_dir.empty()) j["output_dir"] = cfg.output_dir;
  return j;
}

FeatureMatrix load_experiment_data(const ExperimentConfig& cfg, Warnings* warnings) {
  if (cfg.dataset.builtin) return load_dataset(builtin_spec(*cfg.dataset.builtin, cfg.normalize), warnings);
  if (cfg.dataset.file) {
    DatasetSpec spec = *cfg.dataset.file;
    spec.normalize = cfg.normalize;
    return load_dataset(spec, warnings);
  }
  if (cfg.dataset.synthetic) {
    return standardize(generate_synthetic(*cfg.dataset.synthetic), cfg.normalize, warnings);
  }
  throw ConfigError("no dataset configured");
}

RunReport run_experiment(const ExperimentConfig& config) {
  Warnings w;
  const FeatureMatrix x = load_experiment_data(config, &w);
  RunReport r = execute(config, x, nullptr);
  r.warnings.insert(r.warnings.begin(), w.begin(), w.end());
  return r;
}

RunReport run_out_of_sample(const ExperimentConfig& config) {
  if (config.method != Method::dogcos) throw ConfigError("out-of-sample runs require method dogcos");
  const SplitConfig split = config.split.value_or(SplitConfig{});
  Warnings w;
  const FeatureMatrix x = load_experiment_data(config, &w);
  const Split parts = train_test_split(x, split.ratio, split.seed, &w);
  if (parts.test.samples() == 0) throw DataError("split left no test samples");
  ExperimentConfig cfg = config;
  cfg.split = split;
  if (cfg.clusters == 0) cfg.clusters = x.num_classes();
  RunReport r = execute(cfg, parts.train, &parts.test);
  r.warnings.insert(r.warnings.begin(), w.begin(), w.end());
  return r;
}

std::vector<SweepRow> emit_sweep(const ExperimentConfig& config, const std::string& param,
                                 const std::vector<double>& values, const std::vector<Method>& methods) {
  if (!kGridParams.count(param) && param != "noise") {
    throw ConfigError("cannot sweep '" + param + "' (alpha, beta, gamma, p, k, noise)");
  }
  if (param == "noise" && !config.dataset.synthetic) {
    throw ConfigError("noise sweeps need a synthetic dataset");
  }
  if (values.empty()) throw ConfigError("sweep needs at least one value");
  std::vector<SweepRow> rows;
  const std::vector<Method> list = methods.empty() ? std::vector<Method>{config.method} : methods;
  for (Method m : list) {
    for (double v : values) {
      ExperimentConfig cfg = config;
      cfg.method = m;
      cfg.grid.erase(param);
      if (param == "noise") {
        cfg.dataset.synthetic->noise = v;
      } else {
        cfg.hyper = with_params(cfg.hyper, {{param, v}});
      }
      const RunReport r = cfg.split ? run_out_of_sample(cfg) : run_experiment(cfg);
      const RestartRecord& best = r.best();
      rows.push_back({to_string(m), param, v, best.test_scores.value_or(best.scores)});
    }
  }
  return rows;
}

Json report_json(const RunReport& report) {
  Json j;
  j["version"] = kVersion;
  j["config"] = to_json(report.config);
  j["selection"] = to_string(report.config.selection);
  j["selected"] = report.selected;
  j["selected_by_objective"] = report.selected_by_objective;
  if (report.selected >= 0) {
    const RestartRecord& b = report.best();
    Json best = scores_json(b.scores);
    if (b.test_scores) best["test"] = scores_json(*b.test_scores);
    best["objective"] = b.objective;
    best["seed"] = b.seed;
    if (!b.params.empty()) best["params"] = b.params;
    best["labels"] = b.labels;
    j["best"] = best;
  }
  if (report.selected_by_objective >= 0) {
    const RestartRecord& o = report.restarts[report.selected_by_objective];
    Json obj = scores_json(o.scores);
    if (o.test_scores) obj["test"] = scores_json(*o.test_scores);
    obj["objective"] = o.objective;
    j["objective_selected"] = obj;
  }
  Json restarts = Json::array();
  for (const auto& r : report.restarts) {
    Json e;
    e["index"] = r.index;
    e["grid_point"] = r.grid_point;
    if (!r.params.empty()) e["params"] = r.params;
    e["seed"] = r.seed;
    e["ok"] = r.ok;
    if (!r.ok) {
      e["error"] = r.error;
    } else {
      e["acc"] = r.scores.acc;
      e["nmi"] = r.scores.nmi;
      e["purity"] = r.scores.purity;
      if (r.test_scores) e["test"] = scores_json(*r.test_scores);
      e["objective"] = r.objective;
      e["sweeps"] = r.sweeps;
      e["converged"] = r.converged;
      e["rank_satisfied"] = r.rank_satisfied;
      e["wall_time"] = r.wall_time;
      if (!r.warnings.empty()) e["warnings"] = r.warnings;
    }
    restarts.push_back(std::move(e));
  }
  j["restarts"] = std::move(restarts);
  j["warnings"] = report.warnings;
  j["wall_time"] = report.wall_time;
  return j;
}

std::string traces_csv(const RunReport& report) {
  std::ostringstream out;
  out << "restart,grid_point,sweep,objective_before,objective_after,lambda,components,labels_changed\n";
  for (const auto& r : report.restarts) {
    for (const auto& s : r.trace) {
      out << r.index << ',' << r.grid_point << ',' << s.sweep << ',' << fmt_double(s.objective_before)
          << ',' << fmt_double(s.objective_after) << ',' << fmt_double(s.lambda) << ','
          << s.components << ',' << (s.labels_changed ? 1 : 0) << '\n';
    }
  }
  return out.str();
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "method,param,value,acc,nmi,purity\n";
  for (const auto& r : rows) {
    out << r.method << ',' << r.param << ',' << fmt_double(r.value) << ',' << fmt_double(r.scores.acc)
        << ',' << fmt_double(r.scores.nmi) << ',' << fmt_double(r.scores.purity) << '\n';
  }
  return out.str();
}

void write_report(const RunReport& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "report.json");
    if (!out) throw DataError("cannot write " + (dir / "report.json").string());
    out << report_json(report).dump(2) << '\n';
  }
  std::ofstream out(dir / "traces.csv");
  if (!out) throw DataError("cannot write " + (dir / "traces.csv").string());
  out << traces_csv(report);
}

}  // namespace dogc
