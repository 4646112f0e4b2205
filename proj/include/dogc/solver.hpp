#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dogc/baselines.hpp"
#include "dogc/subproblems.hpp"

namespace dogc {

enum class Mode { dogc, dogcos };

std::string to_string(Mode mode);

struct SolverOptions {
  int clusters = 2;
  int k = 0;               // neighbours per row; 0 selects round(n / 10)
  Eigen::Index m = 0;      // projection width; 0 selects min(c, d)
  double alpha = 1e-2;
  double beta = 1e-2;      // DOGC-OS only
  double gamma = 1e-2;     // DOGC-OS only
  double p = 1.25;         // DOGC-OS only
  int max_sweeps = 50;
  double tol = 1e-6;
  std::uint64_t seed = 0;
  /// Restart 0 starts from the unperturbed graph; later restarts scale the
  /// initial per-row regularisers by a seeded log-uniform factor in [1/2, 2].
  int restart = 0;
  std::optional<double> lambda0;  // defaults to the mean xi
  bool freeze_xi = false;
  /// DOGC-I: no discrete coupling; labels are the row argmax of F.
  bool relax_labels = false;
  /// DOGC-II: S frozen at a row-normalised Gaussian affinity.
  bool fixed_graph = false;
  std::optional<double> affinity_sigma;
  /// Keep W at the identity (requires m == d).
  bool fixed_projection = false;
  double component_tol = 1e-8;
  FUpdateOptions f_options;
  WUpdateOptions w_options;
};

struct AblationFlags {
  bool relax_labels = false;
  bool fixed_graph = false;
};

/// Returns `base` with the DOGC-I / DOGC-II switches applied.
SolverOptions ablation_variant(SolverOptions base, AblationFlags flags);

struct SweepRecord {
  int sweep = 0;
  double objective_before = 0.0;
  double objective_after = 0.0;
  double lambda = 0.0;     // value used during the sweep
  int components = 0;      // of S after the graph update
  bool labels_changed = false;
};

struct SolverState {
  SimilarityGraph S;
  ContinuousLabels F;
  DiscreteLabels Y;
  RotationMatrix Q;
  ProjectionMatrix W;
  std::optional<Predictor> P;
  std::optional<IrlsWeights> D;
  GraphHyperParams hyper;
  double p = 2.0;
  bool relax_labels = false;
  std::vector<double> objective_trace;  // objective after each sweep
  std::vector<SweepRecord> sweeps;
  int iteration = 0;
  std::uint64_t rng_seed = 0;
};

struct ClusteringResult {
  std::vector<int> labels;
  SolverState state;
  Mode mode = Mode::dogc;
  bool converged = false;
  bool rank_satisfied = false;
  int sweeps = 0;
  double wall_time = 0.0;
  Warnings warnings;
};

/// Full objective at the current variables: graph fit with per-row
/// regularisers, 2 lambda Tr(F^T L_S F), the rotation fit (unless the labels
/// are relaxed) and, for DOGC-OS, beta (sum_i |r_i|^p + gamma |P|^2).
double objective_value(const Matrix& x, const SolverState& state, Mode mode);

ClusteringResult dogc_fit(const FeatureMatrix& x, const SolverOptions& options);
ClusteringResult dogcos_fit(const FeatureMatrix& x, const SolverOptions& options);
ClusteringResult fit(const FeatureMatrix& x, Mode mode, const SolverOptions& options);

/// Row-wise argmax of X_new^T P.
std::vector<int> predict_out_of_sample(const Predictor& p, const Matrix& x_new);

/// Number of distinct columns of x.
int distinct_points(const Matrix& x);

}  // namespace dogc
