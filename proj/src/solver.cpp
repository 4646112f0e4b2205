#include "dogc/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <set>

#include "dogc/random.hpp"

namespace dogc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double centered_sq_norm(const Matrix& z) {
  return (z.colwise() - z.rowwise().mean()).squaredNorm();
}

/// Squared distances of the projected samples divided by Tr(W^T X H X^T W).
Matrix projected_distances(const Matrix& x, const Matrix& w) {
  const Matrix z = w.transpose() * x;
  const double scale = centered_sq_norm(z);
  if (!(scale > 0.0)) throw SolverError("projected data has zero scatter");
  return pairwise_sq_distances(z) / scale;
}

SimilarityGraph solve_graph(const Matrix& dist, const Vector& xi, int k, Warnings* warnings) {
  const Eigen::Index n = dist.rows();
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(k + 1));
  Vector row(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    row = dist.row(i).transpose();
    row(i) = kInf;
    const Vector s = solve_s_row(row, xi(i), warnings);
    for (Eigen::Index j = 0; j < n; ++j) {
      if (s(j) > 0.0) entries.emplace_back(i, j, s(j));
    }
  }
  SimilarityGraph g;
  g.weights.resize(n, n);
  g.weights.setFromTriplets(entries.begin(), entries.end());
  g.weights.makeCompressed();
  g.neighbor_count = k;
  return g;
}

SimilarityGraph row_normalized(const Matrix& a, int k) {
  Matrix s = a;
  for (Eigen::Index i = 0; i < s.rows(); ++i) {
    const double total = s.row(i).sum();
    if (total > 0.0) s.row(i) /= total;
  }
  return make_graph(s, k);
}

Matrix combined_distances(const Matrix& x, const SolverState& st) {
  Matrix d = projected_distances(x, st.W.W);
  if (st.hyper.lambda != 0.0) d += st.hyper.lambda * pairwise_sq_distances(Matrix(st.F.F.transpose()));
  return d;
}

void train_predictor(const Matrix& x, SolverState& st, double gamma, double p, int rounds,
                     Warnings* warnings) {
  IrlsWeights d;
  d.diagonal = Vector::Ones(x.cols());
  for (int r = 0; r < rounds; ++r) {
    st.P = update_P(x, d, st.Y, gamma, p, warnings);
    const Matrix res = prediction_residual(x, *st.P, st.Y);
    d = irls_weights(res, p, default_irls_floor(res));
  }
  st.D = d;
}

void dedupe(Warnings& w) {
  std::set<std::string> seen;
  Warnings out;
  for (auto& msg : w) {
    if (seen.insert(msg).second) out.push_back(std::move(msg));
  }
  w = std::move(out);
}

ClusteringResult trivial_result(const FeatureMatrix& x, Mode mode, const SolverOptions& opt) {
  const Eigen::Index n = x.samples();
  ClusteringResult out;
  out.mode = mode;
  out.labels.resize(static_cast<std::size_t>(n));
  std::iota(out.labels.begin(), out.labels.end(), 0);
  out.state.Y = DiscreteLabels(out.labels, static_cast<int>(n));
  out.state.F.F = Matrix::Identity(n, n);
  out.state.Q.Q = Matrix::Identity(n, n);
  out.state.S.weights.resize(n, n);
  out.state.rng_seed = opt.seed;
  out.converged = true;
  out.rank_satisfied = true;
  warn(&out.warnings, "c equals n; every sample forms its own cluster");
  return out;
}

ClusteringResult run(const FeatureMatrix& fm, Mode mode, const SolverOptions& opt) {
  const auto start = std::chrono::steady_clock::now();
  fm.validate();
  const Matrix& x = fm.data;
  const Eigen::Index n = x.cols();
  const Eigen::Index d = x.rows();
  const int c = opt.clusters;

  if (c < 2) throw ConfigError("cluster count must be at least 2");
  if (c > n) throw ConfigError("cluster count exceeds the number of samples");
  if (c == n) return trivial_result(fm, mode, opt);
  const int distinct = distinct_points(x);
  if (c > distinct) {
    throw SolverError("requested " + std::to_string(c) + " clusters but the data has only " +
                      std::to_string(distinct) + " distinct points");
  }
  if (opt.max_sweeps < 1) throw ConfigError("max_sweeps must be positive");
  if (!(opt.alpha >= 0.0)) throw ConfigError("alpha must be non-negative");
  if (mode == Mode::dogcos) {
    if (!(opt.p > 0.0 && opt.p <= 2.0)) throw ConfigError("p must lie in (0, 2]");
    if (!(opt.gamma > 0.0)) throw ConfigError("gamma must be positive");
    if (!(opt.beta >= 0.0)) throw ConfigError("beta must be non-negative");
  }

  int k = opt.k;
  if (k == 0) k = std::clamp(static_cast<int>(std::lround(n / 10.0)), 1, static_cast<int>(n) - 2);
  if (k < 1 || k > n - 2) {
    throw ConfigError("k = " + std::to_string(k) + " must lie in [1, n - 2]");
  }
  Eigen::Index m = opt.m == 0 ? std::min<Eigen::Index>(c, d) : opt.m;
  if (opt.fixed_projection) m = d;
  if (m < 1 || m > d) throw ConfigError("projection width m must lie in [1, d]");

  ClusteringResult out;
  out.mode = mode;
  Warnings* warnings = &out.warnings;
  SolverState& st = out.state;
  st.rng_seed = opt.seed;
  st.relax_labels = opt.relax_labels;
  st.p = mode == Mode::dogcos ? opt.p : 2.0;
  st.hyper.k = k;
  st.hyper.alpha = opt.alpha;
  st.hyper.beta = mode == Mode::dogcos ? opt.beta : 0.0;
  st.hyper.gamma = mode == Mode::dogcos ? opt.gamma : 0.0;
  const double alpha_eff = opt.relax_labels ? 0.0 : opt.alpha;

  // --- initialisation ---
  Rng rng(opt.seed);
  const double factor =
      opt.restart > 0 ? std::exp(rng.uniform(std::log(0.5), std::log(2.0))) : 1.0;
  if (opt.fixed_graph) {
    FixedAffinity a = gaussian_affinity(fm, opt.affinity_sigma);
    if (factor != 1.0) a = gaussian_affinity(fm, a.bandwidth * factor);
    st.S = row_normalized(a.weights, k);
  } else {
    const Matrix raw = pairwise_sq_distances(x);
    const XiEstimate xi0 = compute_xi(raw, k, warnings);
    st.S = solve_graph(raw, xi0.rows * factor, k, warnings);
  }
  LaplacianPair lap = laplacian(st.S);
  st.F.F = smallest_eigenvectors(lap.dense(), c);
  KMeansOptions km;
  km.seed = derive_seed(opt.seed, 1);
  st.Y = DiscreteLabels(kmeans(st.F.F.transpose(), c, km).labels, c);
  st.Q.Q = Matrix::Identity(c, c);
  if (opt.fixed_projection) {
    st.W.W = Matrix::Identity(d, d);
  } else {
    Matrix v = x * (lap.laplacian * x.transpose());
    ProjectionMatrix w0{smallest_eigenvectors(0.5 * (v + v.transpose()), m)};
    st.W = update_W(x, lap, m, w0, opt.w_options, warnings).W;
  }
  {
    const XiEstimate xi = compute_xi(projected_distances(x, st.W.W), k, warnings);
    st.hyper.xi_rows = xi.rows;
    st.hyper.xi = xi.mean;
    st.hyper.lambda = opt.lambda0.value_or(xi.mean);
    if (!(st.hyper.lambda > 0.0)) throw ConfigError("initial lambda must be positive");
  }
  if (mode == Mode::dogcos && !opt.relax_labels) {
    train_predictor(x, st, opt.gamma, opt.p, 3, warnings);
  }

  // --- alternating sweeps ---
  int components = connected_components(st.S, opt.component_tol).count;
  bool rank_ok = components == c;
  for (int sweep = 1; sweep <= opt.max_sweeps; ++sweep) {
    SweepRecord rec;
    rec.sweep = sweep;
    rec.lambda = st.hyper.lambda;
    LambdaUpdate next_lambda{st.hyper.lambda, rank_ok};

    Matrix dist;
    if (!opt.fixed_graph) {
      dist = combined_distances(x, st);
      if (!opt.freeze_xi || sweep == 1) {
        const XiEstimate xi = compute_xi(dist, k, warnings);
        st.hyper.xi_rows = xi.rows;
        st.hyper.xi = xi.mean;
      }
    }
    rec.objective_before = objective_value(x, st, mode);

    if (!opt.fixed_graph) {
      st.S = solve_graph(dist, st.hyper.xi_rows, k, warnings);
      components = connected_components(st.S, opt.component_tol).count;
      next_lambda = adapt_lambda(components, c, st.hyper.lambda);
      rank_ok = next_lambda.rank_satisfied;
      lap = laplacian(st.S);
    }
    rec.components = components;

    st.F = update_F(lap, st.Y, st.Q, alpha_eff, st.hyper.lambda, st.F, opt.f_options, warnings).F;
    if (!opt.fixed_projection) {
      st.W = update_W(x, lap, m, st.W, opt.w_options, warnings).W;
    }

    const DiscreteLabels previous = st.Y;
    if (opt.relax_labels) {
      st.Y = argmax_rows(st.F.F);
    } else {
      st.Q = procrustes(st.F, st.Y);
      if (mode == Mode::dogcos) {
        Matrix res = prediction_residual(x, *st.P, st.Y);
        IrlsWeights dw = irls_weights(res, opt.p, default_irls_floor(res));
        st.P = update_P(x, dw, st.Y, opt.gamma, opt.p, warnings);
        res = prediction_residual(x, *st.P, st.Y);
        st.D = irls_weights(res, opt.p, default_irls_floor(res));
        st.Y = update_Y_dogcos(st.F, st.Q, x, *st.P, *st.D, opt.alpha, opt.beta);
      } else {
        st.Y = update_Y_dogc(st.F, st.Q);
      }
    }
    rec.labels_changed = !(previous == st.Y);
    rec.objective_after = objective_value(x, st, mode);
    st.objective_trace.push_back(rec.objective_after);
    st.sweeps.push_back(rec);
    st.iteration = sweep;
    st.hyper.lambda = next_lambda.lambda;

    const double change = std::abs(rec.objective_before - rec.objective_after);
    const bool flat = change <= opt.tol * std::max(std::abs(rec.objective_before), 1e-12);
    if (!rec.labels_changed && flat && (opt.fixed_graph || rank_ok)) {
      out.converged = true;
      break;
    }
  }

  if (opt.fixed_graph) rank_ok = connected_components(st.S, opt.component_tol).count == c;
  if (mode == Mode::dogcos && opt.relax_labels) {
    train_predictor(x, st, opt.gamma, opt.p, 3, warnings);
  }
  out.rank_satisfied = rank_ok;
  out.converged = out.converged && (opt.fixed_graph || rank_ok);
  out.labels = st.Y.labels;
  out.sweeps = st.iteration;
  if (const int empty = st.Y.empty_clusters(); empty > 0) {
    warn(warnings, std::to_string(empty) + " clusters are empty in the final labelling");
  }
  dedupe(out.warnings);
  out.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace

std::string to_string(Mode mode) { return mode == Mode::dogc ? "dogc" : "dogcos"; }

SolverOptions ablation_variant(SolverOptions base, AblationFlags flags) {
  base.relax_labels = flags.relax_labels;
  base.fixed_graph = flags.fixed_graph;
  return base;
}

double objective_value(const Matrix& x, const SolverState& st, Mode mode) {
  const Matrix z = st.W.W.transpose() * x;
  const double scale = centered_sq_norm(z);
  double graph = 0.0;
  for (Eigen::Index i = 0; i < st.S.weights.outerSize(); ++i) {
    const double xi = st.hyper.xi_rows.size() > i ? st.hyper.xi_rows(i) : st.hyper.xi;
    for (SparseRowMatrix::InnerIterator it(st.S.weights, i); it; ++it) {
      const double s = it.value();
      graph += s * (z.col(i) - z.col(it.col())).squaredNorm() / scale + xi * s * s;
    }
  }
  const LaplacianPair lap = laplacian(st.S);
  const Matrix& f = st.F.F;
  double total = graph + 2.0 * st.hyper.lambda * (f.transpose() * (lap.laplacian * f)).trace();
  if (!st.relax_labels) {
    total += st.hyper.alpha * (st.Y.indicator() - f * st.Q.Q).squaredNorm();
    if (mode == Mode::dogcos && st.P.has_value()) {
      const Matrix res = prediction_residual(x, *st.P, st.Y);
      total += st.hyper.beta * (l2p_norm(res, st.p) + st.hyper.gamma * st.P->P.squaredNorm());
    }
  }
  return total;
}

ClusteringResult fit(const FeatureMatrix& x, Mode mode, const SolverOptions& options) {
  return run(x, mode, options);
}

ClusteringResult dogc_fit(const FeatureMatrix& x, const SolverOptions& options) {
  return run(x, Mode::dogc, options);
}

ClusteringResult dogcos_fit(const FeatureMatrix& x, const SolverOptions& options) {
  return run(x, Mode::dogcos, options);
}

std::vector<int> predict_out_of_sample(const Predictor& p, const Matrix& x_new) {
  if (x_new.rows() != p.P.rows()) {
    throw DataError("new data has " + std::to_string(x_new.rows()) + " features, predictor expects " +
                    std::to_string(p.P.rows()));
  }
  return argmax_rows(x_new.transpose() * p.P).labels;
}

int distinct_points(const Matrix& x) {
  std::vector<Eigen::Index> order(static_cast<std::size_t>(x.cols()));
  std::iota(order.begin(), order.end(), 0);
  auto less = [&](Eigen::Index a, Eigen::Index b) {
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
      if (x(r, a) != x(r, b)) return x(r, a) < x(r, b);
    }
    return false;
  };
  std::sort(order.begin(), order.end(), less);
  int count = order.empty() ? 0 : 1;
  for (std::size_t i = 1; i < order.size(); ++i) {
    if (less(order[i - 1], order[i])) ++count;
  }
  return count;
}

}  // namespace dogc
