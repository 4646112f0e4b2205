#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "dogc/checkpoint.hpp"
#include "dogc/data.hpp"
#include "dogc/metrics.hpp"
#include "dogc/solver.hpp"
#include "oracles.hpp"

using namespace dogc;

namespace {

FeatureMatrix blobs(Rng& rng, int per_cluster, int c, int d, double spread)
{
  const Matrix centers = 6.0 * oracle::random_matrix(rng, d, c);
  Matrix x(d, per_cluster * c);
  std::vector<int> y;
  for (int k = 0; k < c; ++k)
    for (int i = 0; i < per_cluster; ++i) {
      const int col = k * per_cluster + i;
      for (int r = 0; r < d; ++r) x(r, col) = centers(r, k) + spread * rng.normal();
      y.push_back(k);
    }
  return FeatureMatrix(x, y);
}

void expect_monotone(const ClusteringResult& r)
{
  for (const SweepRecord& s : r.state.sweeps) {
    EXPECT_LE(s.objective_after, s.objective_before + 1e-9 * std::max(1.0, std::abs(s.objective_before)))
        << "sweep " << s.sweep;
  }
}

}  // namespace

TEST(Objective, hand_computed_three_points)
{
  Matrix x(1, 3);
  x << 0, 1, 3;
  SolverState st;
  Matrix s(3, 3);
  s << 0, 1, 0,
       0.5, 0, 0.5,
       0, 1, 0;
  st.S = make_graph(s, 1);
  st.W.W = Matrix::Ones(1, 1);
  st.hyper.xi_rows = Vector(3);
  st.hyper.xi_rows << 1, 2, 3;
  st.hyper.lambda = 0.5;
  st.hyper.alpha = 0.1;
  st.F.F = Matrix::Identity(3, 2);
  st.Y = DiscreteLabels({0, 1, 1}, 2);
  st.Q.Q = Matrix::Identity(2, 2);
  // Scatter of {0, 1, 3} is 14/3; weighted distances sum to 7.5; xi terms 1 + 1 + 3;
  // Tr(F^T L F) = 0.75 * 2 + 0.75 * 1; |Y - F Q|^2 = 1.
  const double expected = 7.5 / (14.0 / 3.0) + 5.0 + 2.0 * 0.5 * 2.25 + 0.1 * 1.0;
  EXPECT_NEAR(objective_value(x, st, Mode::dogc), expected, 1e-12);

  st.relax_labels = true;
  EXPECT_NEAR(objective_value(x, st, Mode::dogc), expected - 0.1, 1e-12);
}

TEST(Solver, two_moon_is_separated_exactly)
{
  SyntheticConfig cfg;
  cfg.kind = SyntheticKind::two_moon;
  cfg.n = 200;
  cfg.noise = 0.05;
  cfg.seed = 1;
  const FeatureMatrix x = generate_synthetic(cfg);
  SolverOptions opt;
  opt.clusters = 2;
  const ClusteringResult r = dogc_fit(x, opt);
  EXPECT_DOUBLE_EQ(accuracy(r.labels, x.labels), 1.0);
  EXPECT_TRUE(r.rank_satisfied);
  EXPECT_EQ(connected_components(r.state.S).count, 2);
  expect_monotone(r);
}

TEST(Solver, monotone_on_random_blobs_both_modes)
{
  Rng rng(101);
  for (int trial = 0; trial < 6; ++trial) {
    const int c = 2 + trial % 3;
    const FeatureMatrix x = blobs(rng, 20, c, 4, 1.5);
    SolverOptions opt;
    opt.clusters = c;
    opt.seed = trial;
    opt.restart = trial % 2;
    const ClusteringResult a = dogc_fit(x, opt);
    const ClusteringResult b = dogcos_fit(x, opt);
    expect_monotone(a);
    expect_monotone(b);
    EXPECT_TRUE(a.state.F.is_orthonormal(1e-8));
    EXPECT_TRUE(a.state.W.is_orthonormal(1e-8));
    EXPECT_TRUE(b.state.Q.is_orthogonal(1e-8));
    EXPECT_NO_THROW(a.state.S.validate(1e-9));
    EXPECT_LE(a.state.S.max_row_support(), a.state.hyper.k);
  }
}

TEST(Solver, deterministic_for_fixed_seed)
{
  Rng rng(102);
  const FeatureMatrix x = blobs(rng, 25, 3, 3, 2.0);
  SolverOptions opt;
  opt.clusters = 3;
  opt.seed = 77;
  opt.restart = 4;
  const ClusteringResult a = dogcos_fit(x, opt);
  const ClusteringResult b = dogcos_fit(x, opt);
  EXPECT_EQ(a.labels, b.labels);
  EXPECT_EQ(a.state.objective_trace, b.state.objective_trace);
  EXPECT_EQ(a.state.F.F, b.state.F.F);
}

TEST(Solver, zero_beta_with_p_two_reproduces_dogc)
{
  Rng rng(103);
  const FeatureMatrix x = blobs(rng, 20, 3, 5, 2.5);
  SolverOptions opt;
  opt.clusters = 3;
  opt.beta = 0.0;
  opt.p = 2.0;
  const ClusteringResult a = dogc_fit(x, opt);
  const ClusteringResult b = dogcos_fit(x, opt);
  EXPECT_EQ(a.labels, b.labels);
  ASSERT_EQ(a.state.objective_trace.size(), b.state.objective_trace.size());
  for (std::size_t i = 0; i < a.state.objective_trace.size(); ++i)
    EXPECT_NEAR(a.state.objective_trace[i], b.state.objective_trace[i],
                1e-10 * std::abs(a.state.objective_trace[i]));
}

TEST(Solver, frozen_graph_and_identity_projection_reduce_to_spectral_embedding)
{
  Rng rng(104);
  const FeatureMatrix x = blobs(rng, 20, 3, 2, 1.0);
  SolverOptions opt;
  opt.clusters = 3;
  opt.alpha = 1e-12;
  opt.fixed_graph = true;
  opt.fixed_projection = true;
  opt.max_sweeps = 1;
  const ClusteringResult r = dogc_fit(x, opt);
  const SpectralResult sc = spectral_clustering(r.state.S.dense(), 3);
  EXPECT_LT(oracle::max_principal_angle(r.state.F.F, sc.embedding), 1e-4);
  EXPECT_TRUE(r.state.W.W.isApprox(Matrix::Identity(2, 2)));
}

TEST(Solver, relaxed_labels_are_argmax_of_f)
{
  Rng rng(105);
  const FeatureMatrix x = blobs(rng, 15, 2, 3, 1.0);
  SolverOptions opt = ablation_variant(SolverOptions{}, AblationFlags{true, false});
  opt.clusters = 2;
  const ClusteringResult r = dogcos_fit(x, opt);
  EXPECT_EQ(r.labels, argmax_rows(r.state.F.F).labels);
  EXPECT_TRUE(r.state.P.has_value());
  expect_monotone(r);
}

TEST(Solver, fixed_graph_keeps_gaussian_weights)
{
  Rng rng(106);
  const FeatureMatrix x = blobs(rng, 10, 2, 2, 1.0);
  SolverOptions opt = ablation_variant(SolverOptions{}, AblationFlags{false, true});
  opt.clusters = 2;
  const ClusteringResult r = dogc_fit(x, opt);
  Matrix a = gaussian_affinity(x).weights;
  for (Eigen::Index i = 0; i < a.rows(); ++i) a.row(i) /= a.row(i).sum();
  EXPECT_TRUE(r.state.S.dense().isApprox(a, 1e-12));
  expect_monotone(r);
}

TEST(Solver, clusters_equal_samples_is_trivial)
{
  Matrix x(1, 4);
  x << 0, 1, 2, 3;
  SolverOptions opt;
  opt.clusters = 4;
  const ClusteringResult r = dogc_fit(FeatureMatrix(x), opt);
  EXPECT_EQ(r.labels, (std::vector<int>{0, 1, 2, 3}));
  EXPECT_FALSE(r.warnings.empty());
}

TEST(Solver, too_few_distinct_points_is_an_error)
{
  Matrix x(1, 6);
  x << 0, 0, 0, 1, 1, 1;
  SolverOptions opt;
  opt.clusters = 3;
  EXPECT_THROW(dogc_fit(FeatureMatrix(x), opt), SolverError);
  EXPECT_EQ(distinct_points(x), 2);
}

TEST(Solver, invalid_inputs)
{
  Matrix x = Matrix::Random(2, 10);
  SolverOptions opt;
  opt.clusters = 1;
  EXPECT_THROW(dogc_fit(FeatureMatrix(x), opt), ConfigError);
  opt.clusters = 2;
  opt.k = 9;
  EXPECT_THROW(dogc_fit(FeatureMatrix(x), opt), ConfigError);
  opt.k = 0;
  opt.p = 3.0;
  EXPECT_THROW(dogcos_fit(FeatureMatrix(x), opt), ConfigError);
  x(0, 0) = std::nan("");
  opt.p = 1.0;
  EXPECT_THROW(dogc_fit(FeatureMatrix(x), opt), DataError);
}

TEST(Solver, out_of_sample_prediction)
{
  Rng rng(107);
  const FeatureMatrix x = blobs(rng, 30, 2, 3, 0.5);
  SolverOptions opt;
  opt.clusters = 2;
  const ClusteringResult r = dogcos_fit(x, opt);
  ASSERT_TRUE(r.state.P.has_value());
  const std::vector<int> pred = predict_out_of_sample(*r.state.P, x.data);
  EXPECT_GE(accuracy(pred, x.labels), 0.95);
  EXPECT_THROW(predict_out_of_sample(*r.state.P, Matrix::Zero(2, 3)), DataError);
}

TEST(Checkpoint, round_trip_preserves_state)
{
  Rng rng(108);
  const FeatureMatrix x = blobs(rng, 15, 3, 3, 1.0);
  SolverOptions opt;
  opt.clusters = 3;
  opt.max_sweeps = 5;
  const SolverState st = dogcos_fit(x, opt).state;
  std::stringstream buf;
  write_checkpoint(buf, st);
  const SolverState back = read_checkpoint(buf);
  EXPECT_EQ(back.S.dense(), st.S.dense());
  EXPECT_EQ(back.F.F, st.F.F);
  EXPECT_EQ(back.Y, st.Y);
  EXPECT_EQ(back.Q.Q, st.Q.Q);
  EXPECT_EQ(back.W.W, st.W.W);
  ASSERT_TRUE(back.P.has_value());
  EXPECT_EQ(back.P->P, st.P->P);
  EXPECT_EQ(back.D->diagonal, st.D->diagonal);
  EXPECT_EQ(back.hyper.xi_rows, st.hyper.xi_rows);
  EXPECT_EQ(back.hyper.lambda, st.hyper.lambda);
  EXPECT_EQ(back.objective_trace, st.objective_trace);
  EXPECT_EQ(back.sweeps.size(), st.sweeps.size());
  EXPECT_EQ(back.rng_seed, st.rng_seed);
  EXPECT_EQ(objective_value(x.data, back, Mode::dogcos), objective_value(x.data, st, Mode::dogcos));
}

TEST(Checkpoint, rejects_bad_magic)
{
  std::stringstream buf("NOTADOGCFILE");
  EXPECT_THROW(read_checkpoint(buf), DataError);
}
