#pragma once

// Independent reference computations used only by the tests. None of them
// share code with the library routines they check.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <vector>

#include "dogc/random.hpp"

namespace dogc::oracle {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline Matrix random_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = rng.normal();
  return m;
}

/// Random n x c matrix with orthonormal columns (Householder QR).
inline Matrix random_stiefel(Rng& rng, Eigen::Index n, Eigen::Index c) {
  Eigen::HouseholderQR<Matrix> qr(random_matrix(rng, n, c));
  return qr.householderQ() * Matrix::Identity(n, c);
}

/// Euclidean projection onto the simplex by enumerating every support set
/// and keeping the feasible KKT point with the lowest objective. Exponential;
/// use for n <= 14.
inline Vector simplex_by_enumeration(const Vector& v) {
  const int n = static_cast<int>(v.size());
  Vector best;
  double best_obj = std::numeric_limits<double>::infinity();
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    double sum = 0.0;
    int size = 0;
    for (int j = 0; j < n; ++j) {
      if (mask & (1u << j)) {
        sum += v(j);
        ++size;
      }
    }
    const double theta = (sum - 1.0) / size;
    Vector s = Vector::Zero(n);
    bool feasible = true;
    for (int j = 0; j < n; ++j) {
      if (mask & (1u << j)) {
        s(j) = v(j) - theta;
        if (s(j) < -1e-15) feasible = false;
      }
    }
    if (!feasible) continue;
    s = s.cwiseMax(0.0);
    const double obj = (s - v).squaredNorm();
    if (obj < best_obj) {
      best_obj = obj;
      best = s;
    }
  }
  return best;
}

/// Projected-gradient solution of min_s sum_j d_j s_j + xi s_j^2 on the
/// simplex, with the projection computed by bisection on the threshold.
inline Vector simplex_qp_projected_gradient(const Vector& d, double xi, int iterations = 20000) {
  const Eigen::Index n = d.size();
  auto project = [](const Vector& y) {
    double lo = y.minCoeff() - 1.0;
    double hi = y.maxCoeff();
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double mass = (y.array() - mid).max(0.0).sum();
      (mass > 1.0 ? lo : hi) = mid;
    }
    return Vector((y.array() - 0.5 * (lo + hi)).max(0.0));
  };
  Vector s = Vector::Constant(n, 1.0 / n);
  const double step = 1.0 / (2.0 * xi);  // exact for this separable quadratic
  for (int it = 0; it < iterations; ++it) {
    const Vector grad = d + 2.0 * xi * s;
    const Vector next = project(s - step * grad);
    if ((next - s).norm() < 1e-15) {
      s = next;
      break;
    }
    s = next;
  }
  return s;
}

/// Best orthogonal 2 x 2 Q for |Y - F Q|^2 on a rotation/reflection grid.
inline double procrustes_grid_objective(const Matrix& f, const Matrix& y, double step) {
  double best = std::numeric_limits<double>::infinity();
  for (double t = 0.0; t < 2.0 * std::numbers::pi; t += step) {
    const double c = std::cos(t);
    const double s = std::sin(t);
    Matrix rot(2, 2);
    rot << c, -s, s, c;
    Matrix ref(2, 2);
    ref << c, s, s, -c;
    best = std::min(best, (y - f * rot).squaredNorm());
    best = std::min(best, (y - f * ref).squaredNorm());
  }
  return best;
}

/// Best matched fraction over all bijections (labels must lie in [0, c)).
inline double accuracy_by_permutation(const std::vector<int>& pred, const std::vector<int>& truth, int c) {
  std::vector<int> perm(static_cast<std::size_t>(c));
  std::iota(perm.begin(), perm.end(), 0);
  int best = 0;
  do {
    int hits = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) hits += perm[pred[i]] == truth[i] ? 1 : 0;
    best = std::max(best, hits);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return static_cast<double>(best) / pred.size();
}

/// Row-wise exhaustive search over one-hot rows maximising <y_i, b_i>
/// (equivalently minimising |y_i - b_i|^2); ties go to the lowest index.
inline std::vector<int> onehot_by_enumeration(const Matrix& b) {
  std::vector<int> out(static_cast<std::size_t>(b.rows()));
  for (Eigen::Index i = 0; i < b.rows(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < b.cols(); ++j) {
      Vector y = Vector::Zero(b.cols());
      y(j) = 1.0;
      const double obj = (y - b.row(i).transpose()).squaredNorm();
      if (obj < best) {
        best = obj;
        out[i] = static_cast<int>(j);
      }
    }
  }
  return out;
}

/// P from the explicit formula with dense matrices and a full-pivot LU.
inline Matrix ridge_by_dense_solve(const Matrix& x, const Vector& d, const Matrix& y, double gamma) {
  const Matrix dm = d.asDiagonal();
  const Matrix lhs = x * dm * x.transpose() + gamma * Matrix::Identity(x.rows(), x.rows());
  return lhs.fullPivLu().solve(x * dm * y);
}

/// Largest principal angle between the column spaces of two orthonormal bases.
inline double max_principal_angle(const Matrix& a, const Matrix& b) {
  Eigen::JacobiSVD<Matrix> svd(a.transpose() * b);
  const double smallest = std::clamp(svd.singularValues().minCoeff(), -1.0, 1.0);
  return std::acos(smallest);
}

/// Minimum within-cluster sum of squares over all 2-partitions (columns of x).
inline double best_two_partition_wcss(const Matrix& x) {
  const int n = static_cast<int>(x.cols());
  double best = std::numeric_limits<double>::infinity();
  for (unsigned mask = 0; mask < (1u << (n - 1)); ++mask) {
    double total = 0.0;
    for (int side = 0; side < 2; ++side) {
      Vector mean = Vector::Zero(x.rows());
      int count = 0;
      for (int i = 0; i < n; ++i) {
        if (static_cast<int>((mask >> i) & 1u) == side) {
          mean += x.col(i);
          ++count;
        }
      }
      if (count == 0) continue;
      mean /= count;
      for (int i = 0; i < n; ++i) {
        if (static_cast<int>((mask >> i) & 1u) == side) total += (x.col(i) - mean).squaredNorm();
      }
    }
    best = std::min(best, total);
  }
  return best;
}

/// Trace ratio minimum over unit directions in the plane on a 1-degree grid.
inline double trace_ratio_grid_2d(const Matrix& a, const Matrix& b, Vector* argmin = nullptr) {
  double best = std::numeric_limits<double>::infinity();
  for (int deg = 0; deg < 180; ++deg) {
    const double t = deg * std::numbers::pi / 180.0;
    Vector w(2);
    w << std::cos(t), std::sin(t);
    const double r = w.dot(a * w) / w.dot(b * w);
    if (r < best) {
      best = r;
      if (argmin != nullptr) *argmin = w;
    }
  }
  return best;
}

/// Connected components by depth-first search over a dense adjacency.
inline int components_by_dfs(const Matrix& s, double tol) {
  const Eigen::Index n = s.rows();
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  int count = 0;
  for (Eigen::Index start = 0; start < n; ++start) {
    if (seen[start]) continue;
    ++count;
    std::vector<Eigen::Index> stack{start};
    seen[start] = 1;
    while (!stack.empty()) {
      const Eigen::Index v = stack.back();
      stack.pop_back();
      for (Eigen::Index u = 0; u < n; ++u) {
        if (!seen[u] && 0.5 * (s(v, u) + s(u, v)) > tol) {
          seen[u] = 1;
          stack.push_back(u);
        }
      }
    }
  }
  return count;
}

}  // namespace dogc::oracle
