#include "dogc/graph_core.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

namespace dogc {

namespace {

void require_finite(const Matrix& x, const char* what) {
  if (!x.allFinite()) {
    throw DataError(std::string(what) + " contains non-finite entries");
  }
}

class UnionFind {
 public:
  explicit UnionFind(Eigen::Index n) : parent_(static_cast<std::size_t>(n)) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }

  int find(int v) {
    while (parent_[v] != v) {
      parent_[v] = parent_[parent_[v]];
      v = parent_[v];
    }
    return v;
  }

  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a < b) std::swap(a, b);
    parent_[a] = b;
  }

 private:
  std::vector<int> parent_;
};

Components label_components(UnionFind& uf, Eigen::Index n) {
  Components out;
  out.labels.assign(static_cast<std::size_t>(n), -1);
  std::vector<int> root_label(static_cast<std::size_t>(n), -1);
  for (int i = 0; i < n; ++i) {
    const int r = uf.find(i);
    if (root_label[r] < 0) root_label[r] = out.count++;
    out.labels[i] = root_label[r];
  }
  return out;
}

}  // namespace

int FeatureMatrix::num_classes() const {
  if (labels.empty()) return 0;
  return std::set<int>(labels.begin(), labels.end()).size();
}

void FeatureMatrix::validate() const {
  if (data.cols() < 2) throw DataError("feature matrix needs at least 2 samples");
  if (data.rows() < 1) throw DataError("feature matrix needs at least 1 feature");
  require_finite(data, "feature matrix");
  if (!feature_names.empty() && static_cast<Eigen::Index>(feature_names.size()) != data.rows()) {
    throw DataError("feature name count does not match feature dimension");
  }
  if (!labels.empty() && static_cast<Eigen::Index>(labels.size()) != data.cols()) {
    throw DataError("label count does not match sample count");
  }
}

int SimilarityGraph::max_row_support(double tol) const {
  int best = 0;
  for (Eigen::Index i = 0; i < weights.outerSize(); ++i) {
    int count = 0;
    for (SparseRowMatrix::InnerIterator it(weights, i); it; ++it) {
      if (it.value() > tol) ++count;
    }
    best = std::max(best, count);
  }
  return best;
}

void SimilarityGraph::validate(double row_sum_tol) const {
  if (weights.rows() != weights.cols()) throw DataError("similarity graph must be square");
  for (Eigen::Index i = 0; i < weights.outerSize(); ++i) {
    double sum = 0.0;
    for (SparseRowMatrix::InnerIterator it(weights, i); it; ++it) {
      const double v = it.value();
      if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
        throw DataError("similarity weight outside [0,1] in row " + std::to_string(i));
      }
      if (it.col() == i && v != 0.0) {
        throw DataError("similarity graph has a self loop at " + std::to_string(i));
      }
      sum += v;
    }
    if (std::abs(sum - 1.0) > row_sum_tol) {
      std::ostringstream msg;
      msg << "similarity row " << i << " sums to " << sum;
      throw DataError(msg.str());
    }
  }
}

Matrix pairwise_sq_distances(const Matrix& x, const Matrix* projection) {
  require_finite(x, "data matrix");
  Matrix y;
  if (projection != nullptr) {
    if (projection->rows() != x.rows()) {
      throw DataError("projection rows must equal the feature dimension");
    }
    require_finite(*projection, "projection");
    y = projection->transpose() * x;
  } else {
    y = x;
  }
  const Eigen::Index n = y.cols();
  Matrix d = Matrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = j + 1; i < n; ++i) {
      const double v = (y.col(i) - y.col(j)).squaredNorm();
      d(i, j) = v;
      d(j, i) = v;
    }
  }
  return d;
}

Matrix pairwise_sq_distances(const FeatureMatrix& x, const Matrix* projection) {
  return pairwise_sq_distances(x.data, projection);
}

FixedAffinity gaussian_affinity(const FeatureMatrix& x, std::optional<double> sigma) {
  const Matrix d2 = pairwise_sq_distances(x);
  const Eigen::Index n = d2.rows();
  double bw;
  if (sigma.has_value()) {
    if (!(*sigma > 0.0)) throw ConfigError("Gaussian bandwidth must be positive");
    bw = *sigma;
  } else {
    double total = 0.0;
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index i = j + 1; i < n; ++i) total += std::sqrt(d2(i, j));
    const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
    bw = pairs > 0.0 ? total / pairs : 1.0;
    if (!(bw > 0.0)) bw = 1.0;  // all points identical
  }
  FixedAffinity a;
  a.bandwidth = bw;
  a.weights = (-d2 / (2.0 * bw * bw)).array().exp().matrix();
  a.weights.diagonal().setZero();
  return a;
}

LaplacianPair laplacian(const SparseRowMatrix& s) {
  if (s.rows() != s.cols()) throw DataError("Laplacian input must be square");
  const SparseMatrix sc(s);
  SparseMatrix sym = 0.5 * (sc + SparseMatrix(sc.transpose()));
  LaplacianPair out;
  out.degree = Vector::Zero(s.rows());
  for (Eigen::Index k = 0; k < sym.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(sym, k); it; ++it) {
      if (it.value() < 0.0) throw DataError("Laplacian input has negative weights");
      out.degree(it.row()) += it.value();
    }
  }
  SparseMatrix deg(s.rows(), s.cols());
  deg.reserve(Eigen::VectorXi::Constant(s.cols(), 1));
  for (Eigen::Index i = 0; i < s.rows(); ++i) deg.insert(i, i) = out.degree(i);
  out.laplacian = deg - sym;
  out.laplacian.prune(0.0);
  return out;
}

LaplacianPair laplacian(const Matrix& s) {
  if (s.rows() != s.cols()) throw DataError("Laplacian input must be square");
  return laplacian(SparseRowMatrix(s.sparseView()));
}

LaplacianPair laplacian(const SimilarityGraph& s) { return laplacian(s.weights); }

LaplacianPair laplacian(const FixedAffinity& a) { return laplacian(a.weights); }

Components connected_components(const SparseRowMatrix& s, double tol) {
  if (s.rows() != s.cols()) throw DataError("component input must be square");
  const SparseRowMatrix st = SparseRowMatrix(s.transpose());
  const SparseRowMatrix sym = 0.5 * (s + st);
  UnionFind uf(s.rows());
  for (Eigen::Index i = 0; i < sym.outerSize(); ++i) {
    for (SparseRowMatrix::InnerIterator it(sym, i); it; ++it) {
      if (it.col() != i && it.value() > tol) {
        uf.unite(static_cast<int>(i), static_cast<int>(it.col()));
      }
    }
  }
  return label_components(uf, s.rows());
}

Components connected_components(const SimilarityGraph& s, double tol) {
  return connected_components(s.weights, tol);
}

Components connected_components(const Matrix& s, double tol) {
  if (s.rows() != s.cols()) throw DataError("component input must be square");
  UnionFind uf(s.rows());
  for (Eigen::Index i = 0; i < s.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < s.cols(); ++j) {
      if (0.5 * (s(i, j) + s(j, i)) > tol) uf.unite(static_cast<int>(i), static_cast<int>(j));
    }
  }
  return label_components(uf, s.rows());
}

int count_zero_eigenvalues(const LaplacianPair& l, double tol) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(l.dense(), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw SolverError("Laplacian eigendecomposition failed");
  return static_cast<int>((es.eigenvalues().array() < tol).count());
}

SimilarityGraph make_graph(const Matrix& s, int neighbor_count, double drop_tol) {
  SimilarityGraph g;
  g.weights = s.sparseView(1.0, drop_tol);
  g.weights.makeCompressed();
  g.neighbor_count = neighbor_count;
  return g;
}

}  // namespace dogc
