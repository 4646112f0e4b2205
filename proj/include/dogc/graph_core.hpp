#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <optional>
#include <string>
#include <vector>

#include "dogc/errors.hpp"

namespace dogc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using SparseRowMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using SparseMatrix = Eigen::SparseMatrix<double>;

/// Column-major data set: `data` is d x n, one sample per column.
struct FeatureMatrix {
  Matrix data;
  std::vector<std::string> feature_names;  // empty or d entries
  std::vector<int> labels;                 // empty or n entries, 0-based ids

  FeatureMatrix() = default;
  explicit FeatureMatrix(Matrix x, std::vector<int> y = {})
      : data(std::move(x)), labels(std::move(y)) {}

  Eigen::Index dims() const { return data.rows(); }
  Eigen::Index samples() const { return data.cols(); }
  bool has_labels() const { return !labels.empty(); }
  int num_classes() const;

  /// Throws DataError unless n >= 2, d >= 1, all entries finite and the
  /// optional metadata has matching length.
  void validate() const;
};

/// Learned row-stochastic neighbour graph.
struct SimilarityGraph {
  SparseRowMatrix weights;
  int neighbor_count = 0;

  Eigen::Index size() const { return weights.rows(); }
  Matrix dense() const { return Matrix(weights); }
  /// Largest number of strictly positive entries in any row.
  int max_row_support(double tol = 0.0) const;
  /// Throws DataError when entries leave [0,1], a row does not sum to one
  /// within `row_sum_tol`, or the diagonal is non-zero.
  void validate(double row_sum_tol = 1e-10) const;
};

struct LaplacianPair {
  Vector degree;         // diagonal of D_S
  SparseMatrix laplacian;  // L_S = D_S - (S^T + S) / 2

  Matrix dense() const { return Matrix(laplacian); }
};

/// Fixed Gaussian-kernel affinity.
struct FixedAffinity {
  Matrix weights;
  double bandwidth = 1.0;
};

/// Squared Euclidean distances between the columns of `x`, optionally after
/// projecting with `projection` (d x m): entry (i,j) = |M^T x_i - M^T x_j|^2.
Matrix pairwise_sq_distances(const Matrix& x, const Matrix* projection = nullptr);
Matrix pairwise_sq_distances(const FeatureMatrix& x, const Matrix* projection = nullptr);

/// a_ij = exp(-|x_i - x_j|^2 / (2 sigma^2)), zero diagonal. When `sigma` is
/// empty the mean pairwise Euclidean distance is used.
FixedAffinity gaussian_affinity(const FeatureMatrix& x, std::optional<double> sigma = std::nullopt);

/// Symmetrised Laplacian of any square non-negative weight matrix.
LaplacianPair laplacian(const SparseRowMatrix& s);
LaplacianPair laplacian(const Matrix& s);
LaplacianPair laplacian(const SimilarityGraph& s);
LaplacianPair laplacian(const FixedAffinity& a);

struct Components {
  int count = 0;
  std::vector<int> labels;  // component id per node, numbered by first appearance
};

/// Connected components of the undirected graph with an edge wherever
/// (s_ij + s_ji) / 2 > tol. Union-find; this is the authoritative count.
Components connected_components(const SparseRowMatrix& s, double tol = 1e-8);
Components connected_components(const SimilarityGraph& s, double tol = 1e-8);
Components connected_components(const Matrix& s, double tol = 1e-8);

/// Number of Laplacian eigenvalues below `tol` (dense eigensolver). Used as a
/// cross-check of the traversal count.
int count_zero_eigenvalues(const LaplacianPair& l, double tol = 1e-8);

/// Builds a SimilarityGraph from a dense row-stochastic matrix, dropping
/// entries at or below `drop_tol`.
SimilarityGraph make_graph(const Matrix& s, int neighbor_count, double drop_tol = 0.0);

}  // namespace dogc
