#include "dogc/baselines.hpp"

#include <algorithm>
#include <limits>

#include "dogc/random.hpp"
#include "dogc/subproblems.hpp"

namespace dogc {

namespace {

Matrix seed_plus_plus(const Matrix& x, int c, Rng& rng) {
  const Eigen::Index n = x.cols();
  Matrix centers(x.rows(), c);
  centers.col(0) = x.col(static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(n))));
  Vector nearest = (x.colwise() - centers.col(0)).colwise().squaredNorm().transpose();
  for (int j = 1; j < c; ++j) {
    const double total = nearest.sum();
    Eigen::Index pick = 0;
    if (total > 0.0) {
      double target = rng.uniform() * total;
      pick = n - 1;
      for (Eigen::Index i = 0; i < n; ++i) {
        target -= nearest(i);
        if (target < 0.0) {
          pick = i;
          break;
        }
      }
    } else {
      pick = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(n)));
    }
    centers.col(j) = x.col(pick);
    nearest = nearest.cwiseMin((x.colwise() - centers.col(j)).colwise().squaredNorm().transpose());
  }
  return centers;
}

KMeansResult lloyd(const Matrix& x, int c, Matrix centers, int max_iter) {
  const Eigen::Index n = x.cols();
  KMeansResult out;
  out.labels.assign(static_cast<std::size_t>(n), 0);
  Vector dist(n);
  for (int it = 0; it < max_iter; ++it) {
    bool changed = it == 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      int best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (int j = 0; j < c; ++j) {
        const double dd = (x.col(i) - centers.col(j)).squaredNorm();
        if (dd < best_d) {
          best_d = dd;
          best = j;
        }
      }
      if (out.labels[i] != best) changed = true;
      out.labels[i] = best;
      dist(i) = best_d;
    }
    out.wcss_trace.push_back(dist.sum());
    if (!changed) break;

    Matrix sums = Matrix::Zero(x.rows(), c);
    std::vector<int> counts(static_cast<std::size_t>(c), 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      sums.col(out.labels[i]) += x.col(i);
      ++counts[out.labels[i]];
    }
    for (int j = 0; j < c; ++j) {
      if (counts[j] > 0) {
        centers.col(j) = sums.col(j) / counts[j];
        continue;
      }
      // Re-seed an empty cluster with the point worst served by its centre.
      Eigen::Index far = 0;
      dist.maxCoeff(&far);
      centers.col(j) = x.col(far);
      dist(far) = 0.0;
    }
  }
  out.centers = std::move(centers);
  out.wcss = within_cluster_ss(x, out.labels, c);
  return out;
}

}  // namespace

double within_cluster_ss(const Matrix& x, const std::vector<int>& labels, int c) {
  Matrix sums = Matrix::Zero(x.rows(), c);
  std::vector<int> counts(static_cast<std::size_t>(c), 0);
  for (Eigen::Index i = 0; i < x.cols(); ++i) {
    sums.col(labels[i]) += x.col(i);
    ++counts[labels[i]];
  }
  for (int j = 0; j < c; ++j) {
    if (counts[j] > 0) sums.col(j) /= counts[j];
  }
  double total = 0.0;
  for (Eigen::Index i = 0; i < x.cols(); ++i) total += (x.col(i) - sums.col(labels[i])).squaredNorm();
  return total;
}

KMeansResult kmeans(const Matrix& x, int c, const KMeansOptions& options) {
  if (c < 1 || c > x.cols()) throw ConfigError("k-means needs 1 <= c <= n");
  if (!x.allFinite()) throw DataError("k-means input contains non-finite entries");
  if (options.restarts < 1 || options.max_iter < 1) {
    throw ConfigError("k-means restarts and iterations must be positive");
  }
  KMeansResult best;
  best.wcss = std::numeric_limits<double>::infinity();
  for (int r = 0; r < options.restarts; ++r) {
    Rng rng(derive_seed(options.seed, static_cast<std::uint64_t>(r)));
    KMeansResult run = lloyd(x, c, seed_plus_plus(x, c, rng), options.max_iter);
    if (run.wcss < best.wcss) best = std::move(run);
  }
  return best;
}

SpectralResult spectral_clustering(const Matrix& weights, int c, const KMeansOptions& options) {
  if (weights.rows() != weights.cols()) throw DataError("affinity must be square");
  if (c < 1 || c > weights.rows()) throw ConfigError("spectral clustering needs 1 <= c <= n");
  const LaplacianPair l = laplacian(weights);
  SpectralResult out;
  out.embedding = smallest_eigenvectors(l.dense(), c);
  out.labels = kmeans(out.embedding.transpose(), c, options).labels;
  return out;
}

SpectralResult spectral_clustering(const FixedAffinity& a, int c, const KMeansOptions& options) {
  return spectral_clustering(a.weights, c, options);
}

}  // namespace dogc
