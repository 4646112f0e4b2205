#pragma once

#include <cstdint>
#include <vector>

#include "dogc/graph_core.hpp"

namespace dogc {

struct KMeansOptions {
  int restarts = 10;
  int max_iter = 300;
  std::uint64_t seed = 0;
};

struct KMeansResult {
  std::vector<int> labels;
  Matrix centers;                   // d x c
  double wcss = 0.0;
  std::vector<double> wcss_trace;   // per Lloyd iteration of the selected restart
};

/// Lloyd's algorithm on the columns of `x` (d x n) from k-means++ seeding.
/// Empty clusters are re-seeded with the point farthest from its centre.
/// Returns the restart with the smallest within-cluster sum of squares.
KMeansResult kmeans(const Matrix& x, int c, const KMeansOptions& options = {});

/// Within-cluster sum of squared distances of a labelling.
double within_cluster_ss(const Matrix& x, const std::vector<int>& labels, int c);

struct SpectralResult {
  std::vector<int> labels;
  Matrix embedding;  // n x c, smallest Laplacian eigenvectors
};

/// Unnormalised spectral clustering: k-means on the rows of the c smallest
/// eigenvectors of L_A.
SpectralResult spectral_clustering(const FixedAffinity& a, int c, const KMeansOptions& options = {});
SpectralResult spectral_clustering(const Matrix& weights, int c, const KMeansOptions& options = {});

}  // namespace dogc
