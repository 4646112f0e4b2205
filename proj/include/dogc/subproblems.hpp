#pragma once

// Per-variable updates of the alternating minimisation. Each update solves
// (or monotonically decreases) its block of the clustering objective with the
// remaining variables held fixed.

#include <optional>
#include <vector>

#include "dogc/errors.hpp"
#include "dogc/graph_core.hpp"

namespace dogc {

/// Relaxed cluster indicator F (n x c) with orthonormal columns.
struct ContinuousLabels {
  Matrix F;
  bool is_orthonormal(double tol = 1e-8) const;
};

/// One-hot cluster indicator stored as per-sample cluster ids.
struct DiscreteLabels {
  std::vector<int> labels;
  int clusters = 0;

  DiscreteLabels() = default;
  DiscreteLabels(std::vector<int> ids, int c);
  static DiscreteLabels from_indicator(const Matrix& y);

  Matrix indicator() const;
  Eigen::Index size() const { return static_cast<Eigen::Index>(labels.size()); }
  /// Number of cluster ids in [0, c) that no sample uses.
  int empty_clusters() const;
  bool operator==(const DiscreteLabels&) const = default;
};

/// Orthogonal c x c matrix Q aligning F with the indicator space.
struct RotationMatrix {
  Matrix Q;
  bool is_orthogonal(double tol = 1e-8) const;
};

/// Orthonormal d x m projection W.
struct ProjectionMatrix {
  Matrix W;
  Eigen::Index width() const { return W.cols(); }
  bool is_orthonormal(double tol = 1e-8) const;
};

/// Linear label predictor P (d x c) trained with the l2,p loss.
struct Predictor {
  Matrix P;
  double p = 1.0;
  double gamma = 0.0;
};

/// Diagonal IRLS reweighting D for the l2,p loss.
struct IrlsWeights {
  Vector diagonal;
  double epsilon_floor = 1e-8;
};

struct GraphHyperParams {
  int k = 0;
  double xi = 0.0;          // mean of the per-row regularisers
  Vector xi_rows;           // per-row regularisers used by the S update
  double lambda = 1.0;
  double alpha = 1e-2;
  double beta = 0.0;
  double gamma = 0.0;
};

/// Centered scatter X H X^T with H = I - 11^T / n, computed without forming H.
Matrix centered_scatter(const Matrix& x);
/// H v for the centering matrix H (subtracts the mean).
Vector apply_centering(const Vector& v);

// --- similarity graph rows -------------------------------------------------

/// Euclidean projection of v onto the probability simplex by sorting:
/// s_j = max(v_j + eta, 0) with eta chosen so that sum_j s_j = 1.
struct SimplexProjection {
  Vector s;
  double eta = 0.0;
};
SimplexProjection project_simplex(const Vector& v);

/// Solves min_s sum_j d_j s_j + xi s_j^2 over the probability simplex, i.e.
/// s_j = (-d_j / (2 xi) + eta)_+. Entries equal to +infinity are excluded
/// (use this for the self distance). With xi == 0 all mass goes to the
/// smallest distance, ties to the lowest index.
Vector solve_s_row(const Vector& d, double xi, Warnings* warnings = nullptr);

struct XiEstimate {
  double mean = 0.0;
  Vector rows;
  int floored = 0;
};

/// xi_i = (k/2) d_{i,k+1} - (1/2) sum_{j<=k} d_{ij} on the ascending
/// off-diagonal distances of row i; the mean over rows is reported as well.
/// Rows where this is not positive are floored at 1e-12.
XiEstimate compute_xi(const Matrix& distances, int k, Warnings* warnings = nullptr);
/// Single-row version; `sorted` must hold the ascending candidate distances.
double xi_from_sorted(const std::vector<double>& sorted, int k);

struct LambdaUpdate {
  double lambda = 1.0;
  bool rank_satisfied = false;
};

/// Doubles lambda when the graph has too few components, halves it when it
/// has too many.
LambdaUpdate adapt_lambda(int components, int clusters, double lambda);

// --- continuous labels ----------------------------------------------------

struct FUpdateOptions {
  int max_iterations = 300;
  double tolerance = 1e-10;
  /// Also try a start from the c smallest Laplacian eigenvectors when n is at
  /// most this size (dense eigensolver). 0 disables it.
  Eigen::Index eigen_start_limit = 2000;
};

struct FUpdateResult {
  ContinuousLabels F;
  double objective_before = 0.0;
  double objective_after = 0.0;
  int iterations = 0;
};

/// Value of 2 lambda Tr(F^T L F) + alpha |Y - F Q|^2.
double f_objective(const SparseMatrix& l, const Matrix& y, const Matrix& q, double alpha,
                   double lambda, const Matrix& f);

/// Minimises 2 lambda Tr(F^T L F) + alpha |Y - F Q|^2 over F^T F = I by a
/// generalized power iteration (SVD-projected gradient with a majorising step),
/// warm-started at `f_init`. Never returns an iterate worse than `f_init`.
FUpdateResult update_F(const LaplacianPair& l, const DiscreteLabels& y, const RotationMatrix& q,
                       double alpha, double lambda, const ContinuousLabels& f_init,
                       const FUpdateOptions& options = {}, Warnings* warnings = nullptr);

/// The c eigenvectors of L with the smallest eigenvalues (dense solver).
Matrix smallest_eigenvectors(const Matrix& l, Eigen::Index count, Vector* values = nullptr);

// --- projection -----------------------------------------------------------

struct WUpdateOptions {
  int max_sweeps = 50;
  double kkt_tolerance = 1e-6;
};

struct WUpdateResult {
  ProjectionMatrix W;
  std::vector<double> ratio_trace;  // starts with the ratio at W_init
  int sweeps = 0;
  double kkt_residual = 0.0;
};

/// Tr(W^T X L X^T W) / Tr(W^T X H X^T W).
double trace_ratio(const Matrix& x, const SparseMatrix& l, const Matrix& w);

/// Trace-ratio fixed point: W <- m smallest eigenvectors of
/// X L X^T - rho(W) X H X^T until the stationarity residual drops below the
/// tolerance. Sweeps that do not lower the ratio are rejected.
WUpdateResult update_W(const Matrix& x, const LaplacianPair& l, Eigen::Index m,
                       const ProjectionMatrix& w_init, const WUpdateOptions& options = {},
                       Warnings* warnings = nullptr);

// --- rotation and discrete labels -----------------------------------------

/// argmin_Q |Y - F Q|^2 s.t. Q^T Q = I, i.e. Q = U V^T with F^T Y = U S V^T.
RotationMatrix procrustes(const Matrix& f, const Matrix& y);
RotationMatrix procrustes(const ContinuousLabels& f, const DiscreteLabels& y);

/// Row-wise argmax, ties to the lowest column.
DiscreteLabels argmax_rows(const Matrix& scores);

/// Y_ij = 1 iff j = argmax_k (F Q)_ik.
DiscreteLabels update_Y_dogc(const ContinuousLabels& f, const RotationMatrix& q);

// --- robust predictor -----------------------------------------------------

/// D_ii = 1 / ((2/p) max(|r_i|, eps)^(2-p)).
IrlsWeights irls_weights(const Matrix& residual, double p, double epsilon);
/// eps = 1e-8 * mean row norm of the residual (1e-8 when that is zero).
double default_irls_floor(const Matrix& residual);

/// P = (X D X^T + gamma I)^{-1} X D Y.
Predictor update_P(const Matrix& x, const IrlsWeights& d, const DiscreteLabels& y, double gamma,
                   double p, Warnings* warnings = nullptr);

/// Y_ij = 1 iff j = argmax_k B_ik with B = alpha F Q + beta D X^T P.
DiscreteLabels update_Y_dogcos(const ContinuousLabels& f, const RotationMatrix& q,
                               const Matrix& x, const Predictor& p, const IrlsWeights& d,
                               double alpha, double beta);

/// Residual Y - X^T P.
Matrix prediction_residual(const Matrix& x, const Predictor& p, const DiscreteLabels& y);

/// sum_i |r_i|^p.
double l2p_norm(const Matrix& residual, double p);

}  // namespace dogc
