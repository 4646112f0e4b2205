#pragma once

#include <vector>

#include <Eigen/Dense>

#include "dogc/errors.hpp"

namespace dogc {

/// Joint counts of predicted clusters (rows) against true classes (columns).
/// Labels of either side are compacted to 0..k-1 in order of increasing id.
struct ContingencyTable {
  Eigen::MatrixXi counts;
  Eigen::VectorXi row_sums;
  Eigen::VectorXi col_sums;
  int total = 0;

  static ContingencyTable build(const std::vector<int>& pred, const std::vector<int>& truth);
};

/// Minimum-cost assignment on a square cost matrix (Hungarian algorithm).
/// Returns the column assigned to each row.
std::vector<int> hungarian(const Eigen::MatrixXd& cost);

/// Fraction matched under the best one-to-one relabelling of `pred`.
double accuracy(const std::vector<int>& pred, const std::vector<int>& truth);

/// Mutual information over the geometric mean of the two entropies (natural
/// log). Returns 0 with a warning when either side has a single cluster.
double nmi(const std::vector<int>& pred, const std::vector<int>& truth, Warnings* warnings = nullptr);

/// (1/n) sum_k max_j |cluster_k and class_j|.
double purity(const std::vector<int>& pred, const std::vector<int>& truth);

struct Scores {
  double acc = 0.0;
  double nmi = 0.0;
  double purity = 0.0;
};

Scores evaluate(const std::vector<int>& pred, const std::vector<int>& truth,
                Warnings* warnings = nullptr);

}  // namespace dogc
