#include <gtest/gtest.h>

#include <filesystem>
#include <set>
#include <sstream>

#include "dogc/data.hpp"
#include "oracles.hpp"

using namespace dogc;

namespace {

FeatureMatrix parse(const std::string& text, DatasetSpec spec = {})
{
  std::istringstream in(text);
  return parse_csv(in, spec);
}

std::string error_of(const std::string& text, DatasetSpec spec = {})
{
  try {
    parse(text, spec);
  } catch (const DataError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Csv, parses_header_features_and_labels)
{
  const FeatureMatrix x = parse("a,b,class\n1,2,cat\n3.5,-4,dog\n0,1e3,cat\n");
  EXPECT_EQ(x.dims(), 2);
  EXPECT_EQ(x.samples(), 3);
  EXPECT_EQ(x.feature_names, (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(x.labels, (std::vector<int>{0, 1, 0}));
  EXPECT_DOUBLE_EQ(x.data(1, 2), 1000.0);
  EXPECT_DOUBLE_EQ(x.data(0, 1), 3.5);
}

TEST(Csv, numeric_labels_sort_numerically)
{
  const FeatureMatrix x = parse("f,y\n0,10\n1,9\n2,-1\n");
  EXPECT_EQ(x.labels, (std::vector<int>{2, 1, 0}));
}

TEST(Csv, label_column_by_name_and_index)
{
  DatasetSpec spec;
  spec.label_column = "y";
  FeatureMatrix x = parse("y,f\n1,5\n2,6\n", spec);
  EXPECT_EQ(x.feature_names, (std::vector<std::string>{"f"}));
  EXPECT_DOUBLE_EQ(x.data(0, 1), 6.0);
  spec.label_column = "0";
  spec.has_header = false;
  x = parse("1,5\n2,6\n", spec);
  EXPECT_EQ(x.labels, (std::vector<int>{0, 1}));
}

TEST(Csv, errors_carry_line_numbers)
{
  EXPECT_NE(error_of("a,b,y\n1,2,0\n1,2\n").find("line 3"), std::string::npos);
  EXPECT_NE(error_of("a,b,y\n1,2,0\n\n1,x,1\n").find("line 4"), std::string::npos);
  EXPECT_NE(error_of("a,b,y\n1,nan,0\n").find("line 2"), std::string::npos);
  EXPECT_NE(error_of("a,b,y\n1,2,\n").find("line 2"), std::string::npos);
  DatasetSpec spec;
  spec.label_column = "missing";
  EXPECT_FALSE(error_of("a,b,y\n1,2,0\n", spec).empty());
  EXPECT_FALSE(error_of("a,b,y\n").empty());
}

TEST(Csv, canonical_round_trip_is_bit_exact)
{
  Rng rng(1);
  FeatureMatrix x(oracle::random_matrix(rng, 4, 50));
  x.data(0, 0) = 1e-300;
  x.data(1, 0) = 0.1;
  x.data(2, 0) = -123456789.123456789;
  for (int i = 0; i < 50; ++i) x.labels.push_back(i % 3);
  std::stringstream buf;
  write_canonical_csv(buf, x);
  const FeatureMatrix back = parse_csv(buf, DatasetSpec{});
  EXPECT_EQ(back.data, x.data);
  EXPECT_EQ(back.labels, x.labels);
}

TEST(Standardize, zscore_and_minmax)
{
  Matrix m(2, 4);
  m << 1, 2, 3, 4,
       5, 5, 5, 5;
  Warnings w;
  const FeatureMatrix z = standardize(FeatureMatrix(m), Normalize::zscore, &w);
  EXPECT_NEAR(z.data.row(0).mean(), 0.0, 1e-15);
  EXPECT_NEAR(z.data.row(0).squaredNorm() / 4.0, 1.0, 1e-12);
  EXPECT_EQ(z.data.row(1).cwiseAbs().maxCoeff(), 0.0);
  const FeatureMatrix mm = standardize(FeatureMatrix(m), Normalize::minmax, &w);
  EXPECT_DOUBLE_EQ(mm.data(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(mm.data(0, 3), 1.0);
  EXPECT_DOUBLE_EQ(mm.data(1, 2), 0.0);
  EXPECT_FALSE(w.empty());
  EXPECT_THROW(parse_normalize("unit"), ConfigError);
}

TEST(Split, stratified_sizes_and_disjointness)
{
  Rng rng(2);
  FeatureMatrix x(oracle::random_matrix(rng, 2, 31));
  for (int i = 0; i < 31; ++i) x.labels.push_back(i < 20 ? 0 : (i < 30 ? 1 : 2));
  Warnings w;
  const Split s = train_test_split(x, 0.5, 7, &w);
  int train0 = 0;
  for (int l : s.train.labels) train0 += l == 0;
  EXPECT_EQ(train0, 10);
  EXPECT_EQ(s.train.samples() + s.test.samples(), 31);
  std::set<int> all(s.train_index.begin(), s.train_index.end());
  all.insert(s.test_index.begin(), s.test_index.end());
  EXPECT_EQ(all.size(), 31u);
  EXPECT_FALSE(w.empty());  // class 2 is a singleton
  const Split again = train_test_split(x, 0.5, 7);
  EXPECT_EQ(again.train_index, s.train_index);
  EXPECT_THROW(train_test_split(x, 1.0, 7), ConfigError);
}

TEST(Synthetic, deterministic_and_balanced)
{
  SyntheticConfig cfg;
  cfg.kind = SyntheticKind::two_gaussian;
  cfg.n = 101;
  cfg.seed = 5;
  const FeatureMatrix a = generate_synthetic(cfg);
  EXPECT_EQ(a.data, generate_synthetic(cfg).data);
  int ones = 0;
  for (int l : a.labels) ones += l;
  EXPECT_EQ(ones, 50);
  cfg.seed = 6;
  EXPECT_NE(a.data, generate_synthetic(cfg).data);
}

TEST(Synthetic, noiseless_moons_lie_on_their_arcs)
{
  SyntheticConfig cfg;
  cfg.kind = SyntheticKind::two_moon;
  cfg.noise = 0.0;
  const FeatureMatrix x = generate_synthetic(cfg);
  for (Eigen::Index i = 0; i < x.samples(); ++i) {
    Eigen::Vector2d center(x.labels[i] == 0 ? 0.0 : 1.0, x.labels[i] == 0 ? 0.0 : 0.5);
    EXPECT_NEAR((x.data.col(i) - center).norm(), 1.0, 1e-12);
    if (x.labels[i] == 0) EXPECT_GE(x.data(1, i), -1e-12);
    else EXPECT_LE(x.data(1, i), 0.5 + 1e-12);
  }
}

TEST(Synthetic, small_noise_grid_points_are_nearest_their_centre)
{
  SyntheticConfig cfg;
  cfg.kind = SyntheticKind::multi_cluster_36;
  cfg.n = 720;
  cfg.noise = 0.02;
  const FeatureMatrix x = generate_synthetic(cfg);
  const Matrix centers = multi_cluster_centers();
  int correct = 0;
  for (Eigen::Index i = 0; i < x.samples(); ++i) {
    Eigen::Index best;
    (centers.colwise() - x.data.col(i)).colwise().squaredNorm().minCoeff(&best);
    correct += best == x.labels[i];
  }
  EXPECT_GE(correct, 715);
  EXPECT_THROW(generate_synthetic(SyntheticConfig{SyntheticKind::multi_cluster_36, 50}), ConfigError);
}

TEST(Builtin, registry_and_shipped_files)
{
  EXPECT_EQ(builtin_datasets().size(), 12u);
  for (const BuiltinDataset& b : builtin_datasets()) {
    if (!b.shipped) {
      EXPECT_THROW(builtin_spec(b.name), DataError) << b.name;
      continue;
    }
    const FeatureMatrix x = load_dataset(builtin_spec(b.name));
    EXPECT_EQ(x.samples(), b.table_n) << b.name;
    EXPECT_EQ(x.dims(), b.shipped_d) << b.name;
    EXPECT_EQ(x.num_classes(), b.table_c) << b.name;
  }
  EXPECT_THROW(builtin_spec("iris"), ConfigError);
}

TEST(Builtin, checksums_verify)
{
  for (const ChecksumReport& r : verify_checksums(default_data_dir())) EXPECT_TRUE(r.ok) << r.file;
}

TEST(Builtin, expected_size_mismatch_is_reported)
{
  DatasetSpec spec = builtin_spec("wine");
  spec.expected_n = 177;
  EXPECT_THROW(load_dataset(spec), DataError);
}
