#include "dogc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace dogc {

namespace {

std::vector<int> compact(const std::vector<int>& ids, int* count) {
  std::map<int, int> code;
  for (int v : ids) code.emplace(v, 0);
  int next = 0;
  for (auto& [id, c] : code) c = next++;
  *count = next;
  std::vector<int> out;
  out.reserve(ids.size());
  for (int v : ids) out.push_back(code[v]);
  return out;
}

void check_lengths(const std::vector<int>& pred, const std::vector<int>& truth) {
  if (pred.size() != truth.size()) {
    throw DataError("label vectors differ in length (" + std::to_string(pred.size()) + " vs " +
                    std::to_string(truth.size()) + ")");
  }
  if (pred.empty()) throw DataError("label vectors are empty");
}

}  // namespace

ContingencyTable ContingencyTable::build(const std::vector<int>& pred, const std::vector<int>& truth) {
  check_lengths(pred, truth);
  int rows = 0;
  int cols = 0;
  const auto p = compact(pred, &rows);
  const auto t = compact(truth, &cols);
  ContingencyTable out;
  out.counts = Eigen::MatrixXi::Zero(rows, cols);
  for (std::size_t i = 0; i < p.size(); ++i) ++out.counts(p[i], t[i]);
  out.row_sums = out.counts.rowwise().sum();
  out.col_sums = out.counts.colwise().sum().transpose();
  out.total = static_cast<int>(pred.size());
  return out;
}

std::vector<int> hungarian(const Eigen::MatrixXd& cost) {
  // Shortest augmenting path formulation with row/column potentials, O(n^3).
  const int n = static_cast<int>(cost.rows());
  if (cost.cols() != n) throw ConfigError("assignment cost matrix must be square");
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<int> match(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  for (int i = 1; i <= n; ++i) {
    match[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const int i0 = match[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const int j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> assignment(n, -1);
  for (int j = 1; j <= n; ++j) {
    if (match[j] != 0) assignment[match[j] - 1] = j - 1;
  }
  return assignment;
}

double accuracy(const std::vector<int>& pred, const std::vector<int>& truth) {
  const ContingencyTable t = ContingencyTable::build(pred, truth);
  const Eigen::Index k = std::max(t.counts.rows(), t.counts.cols());
  Eigen::MatrixXd cost = Eigen::MatrixXd::Zero(k, k);
  cost.topLeftCorner(t.counts.rows(), t.counts.cols()) = -t.counts.cast<double>();
  const auto assign = hungarian(cost);
  long matched = 0;
  for (Eigen::Index r = 0; r < t.counts.rows(); ++r) {
    if (assign[r] < t.counts.cols()) matched += t.counts(r, assign[r]);
  }
  return static_cast<double>(matched) / t.total;
}

double nmi(const std::vector<int>& pred, const std::vector<int>& truth, Warnings* warnings) {
  const ContingencyTable t = ContingencyTable::build(pred, truth);
  if (t.counts.rows() < 2 || t.counts.cols() < 2) {
    warn(warnings, "NMI undefined for a single-cluster partition; reporting 0");
    return 0.0;
  }
  const double n = t.total;
  double mi = 0.0;
  for (Eigen::Index i = 0; i < t.counts.rows(); ++i) {
    for (Eigen::Index j = 0; j < t.counts.cols(); ++j) {
      const double nij = t.counts(i, j);
      if (nij > 0) mi += nij * std::log(n * nij / (static_cast<double>(t.row_sums(i)) * t.col_sums(j)));
    }
  }
  double hp = 0.0;
  for (Eigen::Index i = 0; i < t.row_sums.size(); ++i) {
    const double ni = t.row_sums(i);
    hp += ni * std::log(ni / n);
  }
  double ht = 0.0;
  for (Eigen::Index j = 0; j < t.col_sums.size(); ++j) {
    const double nj = t.col_sums(j);
    ht += nj * std::log(nj / n);
  }
  const double value = mi / std::sqrt(hp * ht);
  return std::clamp(value, 0.0, 1.0);
}

double purity(const std::vector<int>& pred, const std::vector<int>& truth) {
  const ContingencyTable t = ContingencyTable::build(pred, truth);
  long total = 0;
  for (Eigen::Index i = 0; i < t.counts.rows(); ++i) total += t.counts.row(i).maxCoeff();
  return static_cast<double>(total) / t.total;
}

Scores evaluate(const std::vector<int>& pred, const std::vector<int>& truth, Warnings* warnings) {
  return {accuracy(pred, truth), nmi(pred, truth, warnings), purity(pred, truth)};
}

}  // namespace dogc
