#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dogc/graph_core.hpp"

namespace dogc {

enum class Normalize { none, zscore, minmax };

Normalize parse_normalize(const std::string& name);
std::string to_string(Normalize mode);

struct DatasetSpec {
  std::string name;
  std::filesystem::path path;
  /// Label column: a header name, or a 0-based index; empty means the last column.
  std::string label_column;
  char delimiter = ',';
  bool has_header = true;
  Normalize normalize = Normalize::none;
  std::optional<int> expected_n;
  std::optional<int> expected_d;
  std::optional<int> expected_c;
};

/// Parses delimited text. Labels are coded 0..c-1 in sorted order (numeric
/// order when every label parses as a number). Errors carry line numbers.
FeatureMatrix parse_csv(std::istream& in, const DatasetSpec& spec, Warnings* warnings = nullptr);

/// Reads `spec.path`, checks the expected sizes and applies `spec.normalize`.
FeatureMatrix load_dataset(const DatasetSpec& spec, Warnings* warnings = nullptr);

/// Canonical layout: header row, shortest round-trip decimal features, label
/// ids in a final `class` column.
void write_canonical_csv(std::ostream& out, const FeatureMatrix& x);
void save_dataset(const std::filesystem::path& path, const FeatureMatrix& x);

FeatureMatrix standardize(const FeatureMatrix& x, Normalize mode, Warnings* warnings = nullptr);

struct Split {
  FeatureMatrix train;
  FeatureMatrix test;
  std::vector<int> train_index;
  std::vector<int> test_index;
};

/// Stratified split: in every class round(ratio * size) samples go to train.
Split train_test_split(const FeatureMatrix& x, double ratio, std::uint64_t seed,
                       Warnings* warnings = nullptr);

enum class SyntheticKind { two_moon, two_gaussian, multi_cluster_36 };

SyntheticKind parse_synthetic_kind(const std::string& name);
std::string to_string(SyntheticKind kind);

struct SyntheticConfig {
  SyntheticKind kind = SyntheticKind::two_moon;
  int n = 200;
  double noise = 0.05;       // isotropic standard deviation
  double separation = 8.0;   // two_gaussian centre distance
  std::uint64_t seed = 0;

  int clusters() const;
};

/// two_moon: upper unit half-circle at the origin and lower unit half-circle
/// centred at (1, 0.5), angles evenly spaced. two_gaussian: blobs at
/// (+-separation/2, 0). multi_cluster_36: blobs centred on the 6 x 6 grid
/// {0, 0.2, ..., 1}^2. `noise` is the per-coordinate standard deviation.
/// Samples are ordered by cluster.
FeatureMatrix generate_synthetic(const SyntheticConfig& config);

/// Grid centres of the 36-cluster generator, 2 x 36.
Matrix multi_cluster_centers();

struct BuiltinDataset {
  std::string name;
  std::string file;   // relative to the data directory
  int table_n = 0;    // size reported for the benchmark table
  int table_d = 0;
  int table_c = 0;
  int shipped_d = 0;  // feature count of the shipped file
  bool shipped = false;
};

/// The twelve benchmark datasets; `shipped` marks those with a canonical CSV.
const std::vector<BuiltinDataset>& builtin_datasets();
const BuiltinDataset* find_builtin(const std::string& name);

/// DOGC_DATA_DIR when set, otherwise the data directory of the source tree.
std::filesystem::path default_data_dir();

/// Dataset description for a builtin dataset with the expected sizes filled in.
DatasetSpec builtin_spec(const std::string& name, Normalize normalize = Normalize::zscore,
                         const std::filesystem::path& data_dir = default_data_dir());

std::string sha256_file(const std::filesystem::path& path);

struct ChecksumReport {
  std::string file;
  std::string expected;
  std::string actual;  // empty when the file is missing
  bool ok = false;
};

/// Checks every entry of `<dir>/SHA256SUMS`.
std::vector<ChecksumReport> verify_checksums(const std::filesystem::path& dir);

}  // namespace dogc
