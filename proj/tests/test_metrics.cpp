#include <gtest/gtest.h>

#include <cmath>

#include "dogc/metrics.hpp"
#include "oracles.hpp"

using namespace dogc;

namespace {

std::vector<int> random_labels(Rng& rng, int n, int c)
{
  std::vector<int> out(static_cast<std::size_t>(n));
  for (int& v : out) v = static_cast<int>(rng.below(c));
  return out;
}

}  // namespace

TEST(Metrics, accuracy_examples)
{
  EXPECT_DOUBLE_EQ(accuracy({0, 0, 1, 1}, {1, 1, 0, 0}), 1.0);
  EXPECT_DOUBLE_EQ(accuracy({0, 0, 0, 1}, {0, 0, 1, 1}), 0.75);
  EXPECT_DOUBLE_EQ(accuracy({0, 1, 2, 3}, {0, 0, 0, 0}), 0.25);
}

TEST(Metrics, nmi_examples)
{
  EXPECT_NEAR(nmi({0, 0, 1, 1}, {1, 1, 0, 0}), 1.0, 1e-12);
  EXPECT_NEAR(nmi({0, 0, 1, 1}, {0, 1, 0, 1}), 0.0, 1e-12);
  Warnings w;
  EXPECT_EQ(nmi({0, 0, 0}, {0, 1, 1}, &w), 0.0);
  EXPECT_EQ(w.size(), 1u);
}

TEST(Metrics, nmi_hand_computed)
{
  // Clusters {0,1,2},{3} against classes {0,1},{2,3}.
  const std::vector<int> pred{0, 0, 0, 1};
  const std::vector<int> truth{0, 0, 1, 1};
  const double mi = 0.5 * std::log(0.5 / (0.75 * 0.5)) + 0.25 * std::log(0.25 / (0.75 * 0.5)) +
                    0.25 * std::log(0.25 / (0.25 * 0.5));
  const double hp = -(0.75 * std::log(0.75) + 0.25 * std::log(0.25));
  const double ht = std::log(2.0);
  EXPECT_NEAR(nmi(pred, truth), mi / std::sqrt(hp * ht), 1e-12);
}

TEST(Metrics, purity_examples)
{
  EXPECT_DOUBLE_EQ(purity({0, 0, 1, 1}, {0, 1, 1, 1}), 0.75);
  EXPECT_DOUBLE_EQ(purity({0, 1, 2, 3}, {0, 0, 1, 1}), 1.0);
}

TEST(Metrics, length_mismatch_is_a_data_error)
{
  EXPECT_THROW(accuracy({0, 1}, {0}), DataError);
  EXPECT_THROW(nmi({}, {}), DataError);
}

TEST(Metrics, contingency_compacts_labels)
{
  const ContingencyTable t = ContingencyTable::build({5, 5, 9}, {2, 7, 7});
  EXPECT_EQ(t.counts.rows(), 2);
  EXPECT_EQ(t.counts(0, 0), 1);
  EXPECT_EQ(t.counts(0, 1), 1);
  EXPECT_EQ(t.counts(1, 1), 1);
  EXPECT_EQ(t.total, 3);
}

TEST(Metrics, hungarian_matches_permutation_enumeration)
{
  Rng rng(1);
  for (int trial = 0; trial < 300; ++trial) {
    const int c = 2 + static_cast<int>(rng.below(5));
    const int n = 5 + static_cast<int>(rng.below(40));
    const std::vector<int> pred = random_labels(rng, n, c);
    const std::vector<int> truth = random_labels(rng, n, c);
    // Enumeration needs labels in [0, c) on both sides; padding handles missing ids.
    EXPECT_NEAR(accuracy(pred, truth), oracle::accuracy_by_permutation(pred, truth, c), 1e-15);
  }
}

TEST(Metrics, hungarian_minimises_random_costs)
{
  Rng rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    const int c = 1 + static_cast<int>(rng.below(6));
    Eigen::MatrixXd cost(c, c);
    for (int i = 0; i < c; ++i)
      for (int j = 0; j < c; ++j) cost(i, j) = rng.uniform(-5.0, 5.0);
    const std::vector<int> a = hungarian(cost);
    double got = 0.0;
    for (int i = 0; i < c; ++i) got += cost(i, a[i]);
    std::vector<int> perm(c);
    for (int i = 0; i < c; ++i) perm[i] = i;
    double best = 1e300;
    do {
      double s = 0.0;
      for (int i = 0; i < c; ++i) s += cost(i, perm[i]);
      best = std::min(best, s);
    } while (std::next_permutation(perm.begin(), perm.end()));
    EXPECT_NEAR(got, best, 1e-12);
  }
}

TEST(Metrics, properties_on_random_pairs)
{
  Rng rng(3);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(60));
    const int c = 1 + static_cast<int>(rng.below(6));
    const std::vector<int> pred = random_labels(rng, n, c);
    const std::vector<int> truth = random_labels(rng, n, 1 + static_cast<int>(rng.below(6)));
    const Scores s = evaluate(pred, truth);
    EXPECT_GE(s.acc, 0.0);
    EXPECT_LE(s.acc, 1.0);
    EXPECT_GE(s.nmi, 0.0);
    EXPECT_LE(s.nmi, 1.0);
    EXPECT_GE(s.purity, s.acc - 1e-15);
    EXPECT_LE(s.purity, 1.0);
    EXPECT_NEAR(nmi(pred, truth), nmi(truth, pred), 1e-12);
    // Relabelling the prediction changes nothing.
    std::vector<int> renamed(pred);
    for (int& v : renamed) v = 10 * (c - v);
    EXPECT_NEAR(accuracy(renamed, truth), s.acc, 1e-15);
    EXPECT_NEAR(nmi(renamed, truth), s.nmi, 1e-12);
    EXPECT_DOUBLE_EQ(accuracy(truth, truth), 1.0);
  }
}
