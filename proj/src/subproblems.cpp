#include "dogc/subproblems.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace dogc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kXiFloor = 1e-12;

double orthonormality_error(const Matrix& m) {
  const Matrix g = m.transpose() * m;
  return (g - Matrix::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
}

/// Orthonormal polar factor U V^T of a tall matrix.
Matrix polar_factor(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return svd.matrixU() * svd.matrixV().transpose();
}

/// alpha * Y Q^T without forming the indicator matrix.
Matrix label_target(const DiscreteLabels& y, const Matrix& q, double alpha) {
  Matrix g(y.size(), q.rows());
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    g.row(i) = alpha * q.col(y.labels[i]).transpose();
  }
  return g;
}

double gpi_objective(const SparseMatrix& a, const Matrix& g, double alpha, Eigen::Index n_rows,
                     const Matrix& f, const Matrix& q) {
  // Tr(F^T A F) + alpha |Y - FQ|^2 expanded with |Y|^2 = n and G = alpha Y Q^T.
  const double quad = (f.transpose() * (a * f)).trace();
  if (alpha == 0.0) return quad;
  return quad + alpha * (static_cast<double>(n_rows) + (f * q).squaredNorm()) -
         2.0 * f.cwiseProduct(g).sum();
}

struct GpiRun {
  Matrix f;
  double objective;
  int iterations;
};

GpiRun run_gpi(const SparseMatrix& a, double mu, const Matrix& g, double alpha, const Matrix& q,
               Eigen::Index n_rows, Matrix f, const FUpdateOptions& opt) {
  double obj = gpi_objective(a, g, alpha, n_rows, f, q);
  int it = 0;
  for (; it < opt.max_iterations; ++it) {
    const Matrix m = mu * f - a * f + g;
    Matrix next = polar_factor(m);
    const double next_obj = gpi_objective(a, g, alpha, n_rows, next, q);
    if (!(next_obj <= obj)) break;
    const double gain = obj - next_obj;
    f = std::move(next);
    obj = next_obj;
    if (gain <= opt.tolerance * std::max(1.0, std::abs(obj))) {
      ++it;
      break;
    }
  }
  return {std::move(f), obj, it};
}

}  // namespace

bool ContinuousLabels::is_orthonormal(double tol) const {
  return F.size() > 0 && orthonormality_error(F) <= tol;
}

DiscreteLabels::DiscreteLabels(std::vector<int> ids, int c) : labels(std::move(ids)), clusters(c) {
  if (c < 1) throw ConfigError("cluster count must be positive");
  for (int v : labels) {
    if (v < 0 || v >= c) throw DataError("cluster id " + std::to_string(v) + " outside [0, c)");
  }
}

DiscreteLabels DiscreteLabels::from_indicator(const Matrix& y) {
  std::vector<int> ids(static_cast<std::size_t>(y.rows()));
  for (Eigen::Index i = 0; i < y.rows(); ++i) {
    int hot = -1;
    for (Eigen::Index j = 0; j < y.cols(); ++j) {
      if (y(i, j) == 1.0) {
        if (hot >= 0) throw DataError("indicator row " + std::to_string(i) + " has several ones");
        hot = static_cast<int>(j);
      } else if (y(i, j) != 0.0) {
        throw DataError("indicator entries must be 0 or 1");
      }
    }
    if (hot < 0) throw DataError("indicator row " + std::to_string(i) + " has no one");
    ids[i] = hot;
  }
  return DiscreteLabels(std::move(ids), static_cast<int>(y.cols()));
}

Matrix DiscreteLabels::indicator() const {
  Matrix y = Matrix::Zero(size(), clusters);
  for (Eigen::Index i = 0; i < size(); ++i) y(i, labels[i]) = 1.0;
  return y;
}

int DiscreteLabels::empty_clusters() const {
  std::vector<char> used(static_cast<std::size_t>(clusters), 0);
  for (int v : labels) used[v] = 1;
  return static_cast<int>(std::count(used.begin(), used.end(), 0));
}

bool RotationMatrix::is_orthogonal(double tol) const {
  return Q.rows() == Q.cols() && Q.size() > 0 && orthonormality_error(Q) <= tol;
}

bool ProjectionMatrix::is_orthonormal(double tol) const {
  return W.size() > 0 && orthonormality_error(W) <= tol;
}

Matrix centered_scatter(const Matrix& x) {
  const Vector mean = x.rowwise().mean();
  const Matrix xc = x.colwise() - mean;
  Matrix s = xc * xc.transpose();
  return 0.5 * (s + s.transpose());
}

Vector apply_centering(const Vector& v) {
  return v.array() - v.mean();
}

// --- similarity graph rows -------------------------------------------------

SimplexProjection project_simplex(const Vector& v) {
  std::vector<double> u;
  u.reserve(static_cast<std::size_t>(v.size()));
  for (Eigen::Index j = 0; j < v.size(); ++j) {
    if (std::isfinite(v(j))) u.push_back(v(j));
  }
  if (u.empty()) throw DataError("simplex projection needs at least one finite entry");
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumsum = 0.0;
  double theta = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    cumsum += u[j];
    const double t = (cumsum - 1.0) / static_cast<double>(j + 1);
    if (u[j] - t > 0.0) theta = t;
  }
  SimplexProjection out;
  out.eta = -theta;
  out.s = Vector::Zero(v.size());
  for (Eigen::Index j = 0; j < v.size(); ++j) {
    if (std::isfinite(v(j))) out.s(j) = std::max(v(j) - theta, 0.0);
  }
  return out;
}

Vector solve_s_row(const Vector& d, double xi, Warnings* warnings) {
  if (xi < 0.0 || std::isnan(xi)) throw ConfigError("xi must be non-negative");
  Eigen::Index best = -1;
  int ties = 0;
  for (Eigen::Index j = 0; j < d.size(); ++j) {
    if (std::isnan(d(j)) || d(j) == -kInf) throw DataError("distance row has invalid entries");
    if (d(j) == kInf) continue;
    if (best < 0 || d(j) < d(best)) {
      best = j;
      ties = 0;
    } else if (d(j) == d(best)) {
      ++ties;
    }
  }
  if (best < 0) throw DataError("distance row has no finite candidate");

  if (xi == 0.0) {
    if (ties > 0) warn(warnings, "xi = 0 with tied nearest distances; lowest index chosen");
    Vector s = Vector::Zero(d.size());
    s(best) = 1.0;
    return s;
  }

  Vector v(d.size());
  for (Eigen::Index j = 0; j < d.size(); ++j) {
    v(j) = d(j) == kInf ? -kInf : -d(j) / (2.0 * xi);
  }
  Vector s = project_simplex(v).s;
  // Entries that are zero in exact arithmetic can survive as round-off.
  bool cleaned = false;
  for (Eigen::Index j = 0; j < s.size(); ++j) {
    if (s(j) > 0.0 && s(j) < 1e-12) {
      s(j) = 0.0;
      cleaned = true;
    }
  }
  if (cleaned) s /= s.sum();
  return s;
}

double xi_from_sorted(const std::vector<double>& sorted, int k) {
  if (k < 1 || static_cast<std::size_t>(k) >= sorted.size()) {
    throw ConfigError("neighbour count k needs k + 1 candidates");
  }
  double head = 0.0;
  for (int j = 0; j < k; ++j) head += sorted[j];
  return 0.5 * k * sorted[k] - 0.5 * head;
}

XiEstimate compute_xi(const Matrix& distances, int k, Warnings* warnings) {
  const Eigen::Index n = distances.rows();
  if (distances.cols() != n) throw DataError("distance matrix must be square");
  if (k < 1 || k > n - 2) {
    throw ConfigError("k = " + std::to_string(k) + " must lie in [1, n - 2] for n = " +
                      std::to_string(n));
  }
  XiEstimate out;
  out.rows.resize(n);
  std::vector<double> row(static_cast<std::size_t>(n - 1));
  for (Eigen::Index i = 0; i < n; ++i) {
    std::size_t pos = 0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j != i) row[pos++] = distances(i, j);
    }
    std::partial_sort(row.begin(), row.begin() + k + 1, row.end());
    double xi = xi_from_sorted(row, k);
    if (!(xi > kXiFloor)) {
      xi = kXiFloor;
      ++out.floored;
    }
    out.rows(i) = xi;
  }
  out.mean = out.rows.mean();
  if (out.floored > 0) {
    warn(warnings, std::to_string(out.floored) +
                       " rows have k + 1 equal nearest distances; xi floored at 1e-12");
  }
  return out;
}

LambdaUpdate adapt_lambda(int components, int clusters, double lambda) {
  if (!(lambda > 0.0)) throw ConfigError("lambda must be positive");
  if (components < clusters) return {2.0 * lambda, false};
  if (components > clusters) return {0.5 * lambda, false};
  return {lambda, true};
}

// --- continuous labels ----------------------------------------------------

double f_objective(const SparseMatrix& l, const Matrix& y, const Matrix& q, double alpha,
                   double lambda, const Matrix& f) {
  return 2.0 * lambda * (f.transpose() * (l * f)).trace() + alpha * (y - f * q).squaredNorm();
}

Matrix smallest_eigenvectors(const Matrix& l, Eigen::Index count, Vector* values) {
  if (count < 1 || count > l.rows()) throw ConfigError("invalid eigenvector count");
  Eigen::SelfAdjointEigenSolver<Matrix> es(l);
  if (es.info() != Eigen::Success) throw SolverError("symmetric eigendecomposition failed");
  if (values != nullptr) *values = es.eigenvalues().head(count);
  return es.eigenvectors().leftCols(count);
}

FUpdateResult update_F(const LaplacianPair& l, const DiscreteLabels& y, const RotationMatrix& q,
                       double alpha, double lambda, const ContinuousLabels& f_init,
                       const FUpdateOptions& options, Warnings* warnings) {
  const Eigen::Index n = l.laplacian.rows();
  const Eigen::Index c = q.Q.rows();
  if (f_init.F.rows() != n || f_init.F.cols() != c || y.size() != n || y.clusters != c) {
    throw ConfigError("update_F: inconsistent shapes");
  }
  if (alpha < 0.0 || lambda < 0.0) throw ConfigError("update_F: weights must be non-negative");

  const SparseMatrix a = 2.0 * lambda * l.laplacian;
  const Matrix g = label_target(y, q.Q, alpha);
  // Gershgorin: the spectrum of L lies in [0, 2 max degree].
  const double mu = 2.0 * lambda * 2.0 * (l.degree.size() > 0 ? l.degree.maxCoeff() : 0.0);

  FUpdateResult out;
  out.objective_before = gpi_objective(a, g, alpha, n, f_init.F, q.Q);

  if (mu == 0.0) {
    // No graph term: the problem is a pure Procrustes fit of F to Y Q^T.
    Matrix f = g.norm() > 0.0 ? polar_factor(g) : f_init.F;
    double obj = gpi_objective(a, g, alpha, n, f, q.Q);
    if (obj > out.objective_before) {
      f = f_init.F;
      obj = out.objective_before;
    }
    out.F.F = std::move(f);
    out.objective_after = obj;
    return out;
  }

  GpiRun best = run_gpi(a, mu, g, alpha, q.Q, n, f_init.F, options);

  if (options.eigen_start_limit > 0 && n <= options.eigen_start_limit) {
    const Matrix u = smallest_eigenvectors(Matrix(l.laplacian), c);
    const Matrix r = g.norm() > 0.0 ? polar_factor(u.transpose() * g) : Matrix::Identity(c, c);
    GpiRun alt = run_gpi(a, mu, g, alpha, q.Q, n, u * r, options);
    alt.iterations += best.iterations;
    if (alt.objective < best.objective) {
      best = std::move(alt);
    } else {
      best.iterations = alt.iterations;
    }
  }

  if (best.objective > out.objective_before) {
    warn(warnings, "update_F did not decrease its objective; keeping the previous F");
    best.f = f_init.F;
    best.objective = out.objective_before;
  }
  out.F.F = std::move(best.f);
  out.objective_after = best.objective;
  out.iterations = best.iterations;
  return out;
}

// --- projection -----------------------------------------------------------

double trace_ratio(const Matrix& x, const SparseMatrix& l, const Matrix& w) {
  const Matrix z = w.transpose() * x;  // m x n
  const double num = (z * (l * z.transpose())).trace();
  const Matrix zc = z.colwise() - z.rowwise().mean();
  const double den = zc.squaredNorm();
  return num / den;
}

WUpdateResult update_W(const Matrix& x, const LaplacianPair& l, Eigen::Index m,
                       const ProjectionMatrix& w_init, const WUpdateOptions& options,
                       Warnings* warnings) {
  const Eigen::Index d = x.rows();
  if (m < 1 || m > d) throw ConfigError("projection width m must lie in [1, d]");
  if (w_init.W.rows() != d || w_init.W.cols() != m) {
    throw ConfigError("update_W: initial projection has the wrong shape");
  }
  Matrix a = x * (l.laplacian * x.transpose());
  a = 0.5 * (a + a.transpose());
  Matrix b = centered_scatter(x);

  auto ratio_of = [&](const Matrix& w) {
    return (w.transpose() * a * w).trace() / (w.transpose() * b * w).trace();
  };

  const double den0 = (w_init.W.transpose() * b * w_init.W).trace();
  const double scale = std::max(b.trace(), std::numeric_limits<double>::min());
  if (!(den0 > 1e-12 * scale)) {
    warn(warnings, "centered scatter is singular on the projected subspace; regularized by 1e-10 I");
    b += 1e-10 * Matrix::Identity(d, d);
  }

  WUpdateResult out;
  Matrix w = w_init.W;
  double rho = ratio_of(w);
  out.ratio_trace.push_back(rho);

  auto kkt = [&](const Matrix& wc, double r) {
    const Matrix v = a - r * b;
    const Matrix gw = v * wc;
    const double norm = a.norm() + std::abs(r) * b.norm();
    if (norm == 0.0) return 0.0;
    return (gw - wc * (wc.transpose() * gw)).norm() / norm;
  };

  out.kkt_residual = kkt(w, rho);
  while (out.sweeps < options.max_sweeps && out.kkt_residual >= options.kkt_tolerance) {
    const Matrix v = a - rho * b;
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (v + v.transpose()));
    if (es.info() != Eigen::Success) throw SolverError("trace-ratio eigendecomposition failed");
    const Matrix cand = es.eigenvectors().leftCols(m);
    const double cand_rho = ratio_of(cand);
    if (!(cand_rho < rho)) break;
    w = cand;
    rho = cand_rho;
    ++out.sweeps;
    out.ratio_trace.push_back(rho);
    out.kkt_residual = kkt(w, rho);
  }
  out.W.W = std::move(w);
  return out;
}

// --- rotation and discrete labels -----------------------------------------

RotationMatrix procrustes(const Matrix& f, const Matrix& y) {
  if (f.rows() != y.rows() || f.cols() != y.cols()) throw ConfigError("procrustes: shape mismatch");
  Eigen::JacobiSVD<Matrix> svd(f.transpose() * y, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return {svd.matrixU() * svd.matrixV().transpose()};
}

RotationMatrix procrustes(const ContinuousLabels& f, const DiscreteLabels& y) {
  // F^T Y accumulated per cluster column.
  Matrix fty = Matrix::Zero(f.F.cols(), y.clusters);
  for (Eigen::Index i = 0; i < y.size(); ++i) fty.col(y.labels[i]) += f.F.row(i).transpose();
  if (f.F.rows() != y.size() || f.F.cols() != y.clusters) {
    throw ConfigError("procrustes: shape mismatch");
  }
  Eigen::JacobiSVD<Matrix> svd(fty, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return {svd.matrixU() * svd.matrixV().transpose()};
}

DiscreteLabels argmax_rows(const Matrix& scores) {
  if (scores.cols() < 1) throw ConfigError("argmax over zero columns");
  std::vector<int> ids(static_cast<std::size_t>(scores.rows()));
  for (Eigen::Index i = 0; i < scores.rows(); ++i) {
    Eigen::Index best = 0;
    for (Eigen::Index j = 1; j < scores.cols(); ++j) {
      if (scores(i, j) > scores(i, best)) best = j;
    }
    ids[i] = static_cast<int>(best);
  }
  return DiscreteLabels(std::move(ids), static_cast<int>(scores.cols()));
}

DiscreteLabels update_Y_dogc(const ContinuousLabels& f, const RotationMatrix& q) {
  return argmax_rows(f.F * q.Q);
}

// --- robust predictor -----------------------------------------------------

IrlsWeights irls_weights(const Matrix& residual, double p, double epsilon) {
  if (!(p > 0.0 && p <= 2.0)) throw ConfigError("loss exponent p must lie in (0, 2]");
  if (!(epsilon > 0.0)) throw ConfigError("IRLS floor must be positive");
  IrlsWeights out;
  out.epsilon_floor = epsilon;
  out.diagonal.resize(residual.rows());
  for (Eigen::Index i = 0; i < residual.rows(); ++i) {
    const double r = std::max(residual.row(i).norm(), epsilon);
    out.diagonal(i) = 1.0 / ((2.0 / p) * std::pow(r, 2.0 - p));
  }
  return out;
}

double default_irls_floor(const Matrix& residual) {
  if (residual.rows() == 0) return 1e-8;
  const double mean = residual.rowwise().norm().mean();
  return mean > 0.0 ? 1e-8 * mean : 1e-8;
}

Predictor update_P(const Matrix& x, const IrlsWeights& d, const DiscreteLabels& y, double gamma,
                   double p, Warnings* warnings) {
  const Eigen::Index dim = x.rows();
  const Eigen::Index n = x.cols();
  if (d.diagonal.size() != n || y.size() != n) throw ConfigError("update_P: shape mismatch");
  if (gamma < 0.0) throw ConfigError("ridge weight gamma must be non-negative");

  const Matrix xd = x * d.diagonal.asDiagonal();
  Matrix k = xd * x.transpose();
  k = 0.5 * (k + k.transpose());
  k.diagonal().array() += gamma;
  Matrix rhs = Matrix::Zero(dim, y.clusters);
  for (Eigen::Index i = 0; i < n; ++i) rhs.col(y.labels[i]) += xd.col(i);

  Eigen::SelfAdjointEigenSolver<Matrix> es(k, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  if (!(lo > 0.0) || hi / lo > 1e12) {
    std::ostringstream msg;
    msg << "predictor system is ill-conditioned (eigenvalues in [" << lo << ", " << hi << "])";
    warn(warnings, msg.str());
  }
  Predictor out;
  out.p = p;
  out.gamma = gamma;
  out.P = k.ldlt().solve(rhs);
  if (!out.P.allFinite()) throw SolverError("predictor solve produced non-finite values");
  return out;
}

DiscreteLabels update_Y_dogcos(const ContinuousLabels& f, const RotationMatrix& q,
                               const Matrix& x, const Predictor& p, const IrlsWeights& d,
                               double alpha, double beta) {
  if (beta == 0.0 && alpha > 0.0) return update_Y_dogc(f, q);
  Matrix b = alpha * (f.F * q.Q);
  if (beta != 0.0) {
    b += beta * (d.diagonal.asDiagonal() * (x.transpose() * p.P));
  }
  return argmax_rows(b);
}

Matrix prediction_residual(const Matrix& x, const Predictor& p, const DiscreteLabels& y) {
  return y.indicator() - x.transpose() * p.P;
}

double l2p_norm(const Matrix& residual, double p) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < residual.rows(); ++i) total += std::pow(residual.row(i).norm(), p);
  return total;
}

}  // namespace dogc
