#include "dogc/data.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <numbers>
#include <sstream>

#include "dogc/random.hpp"

#ifndef DOGC_SOURCE_DATA_DIR
#define DOGC_SOURCE_DATA_DIR "data/uci"
#endif

namespace dogc {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_line(const std::string& line, char delim) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = line.find(delim, pos);
    out.push_back(trim(std::string_view(line).substr(pos, next == std::string::npos ? next : next - pos)));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return out;
}

std::optional<double> parse_number(const std::string& s) {
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  const char* first = s.data();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string data_error(std::size_t line, const std::string& what) {
  return "line " + std::to_string(line) + ": " + what;
}

FeatureMatrix subset(const FeatureMatrix& x, const std::vector<int>& idx) {
  FeatureMatrix out;
  out.data.resize(x.dims(), static_cast<Eigen::Index>(idx.size()));
  out.feature_names = x.feature_names;
  for (std::size_t j = 0; j < idx.size(); ++j) {
    out.data.col(static_cast<Eigen::Index>(j)) = x.data.col(idx[j]);
    if (x.has_labels()) out.labels.push_back(x.labels[idx[j]]);
  }
  return out;
}

}  // namespace

Normalize parse_normalize(const std::string& name) {
  if (name == "none") return Normalize::none;
  if (name == "zscore") return Normalize::zscore;
  if (name == "minmax") return Normalize::minmax;
  throw ConfigError("unknown normalisation '" + name + "' (none, zscore, minmax)");
}

std::string to_string(Normalize mode) {
  switch (mode) {
    case Normalize::none: return "none";
    case Normalize::zscore: return "zscore";
    case Normalize::minmax: return "minmax";
  }
  return "none";
}

FeatureMatrix parse_csv(std::istream& in, const DatasetSpec& spec, Warnings* warnings) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> row_lines;
  std::size_t arity = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    if (trim(line).empty()) continue;
    auto fields = split_line(line, spec.delimiter);
    if (arity == 0) {
      arity = fields.size();
      if (arity < 2) throw DataError(data_error(line_no, "need at least one feature and a label"));
    } else if (fields.size() != arity) {
      throw DataError(data_error(line_no, "expected " + std::to_string(arity) + " fields, found " +
                                              std::to_string(fields.size())));
    }
    if (spec.has_header && header.empty()) {
      header = std::move(fields);
      continue;
    }
    rows.push_back(std::move(fields));
    row_lines.push_back(line_no);
  }
  if (rows.empty()) throw DataError("no data rows in " + spec.path.string());

  std::size_t label_col = arity - 1;
  if (!spec.label_column.empty()) {
    const auto it = std::find(header.begin(), header.end(), spec.label_column);
    if (it != header.end()) {
      label_col = static_cast<std::size_t>(it - header.begin());
    } else if (auto idx = parse_number(spec.label_column);
               idx && *idx >= 0 && std::floor(*idx) == *idx) {
      label_col = static_cast<std::size_t>(*idx);
      if (label_col >= arity) {
        throw DataError("label column index " + spec.label_column + " out of range (" +
                        std::to_string(arity) + " columns)");
      }
    } else {
      throw DataError("label column '" + spec.label_column + "' not found in header");
    }
  }

  const Eigen::Index n = static_cast<Eigen::Index>(rows.size());
  const Eigen::Index d = static_cast<Eigen::Index>(arity - 1);
  FeatureMatrix out;
  out.data.resize(d, n);
  std::vector<std::string> raw_labels(rows.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::Index f = 0;
    for (std::size_t j = 0; j < arity; ++j) {
      const std::string& field = rows[i][j];
      if (j == label_col) {
        if (field.empty()) throw DataError(data_error(row_lines[i], "missing label"));
        raw_labels[i] = field;
        continue;
      }
      const auto v = parse_number(field);
      if (!v || !std::isfinite(*v)) {
        throw DataError(data_error(row_lines[i], "column " + std::to_string(j + 1) + " value '" +
                                                     field + "' is not a finite number"));
      }
      out.data(f++, i) = *v;
    }
  }
  if (!header.empty()) {
    for (std::size_t j = 0; j < arity; ++j) {
      if (j != label_col) out.feature_names.push_back(header[j]);
    }
  }

  std::vector<std::string> classes(raw_labels);
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
  const bool numeric = std::all_of(classes.begin(), classes.end(),
                                   [](const std::string& s) { return parse_number(s).has_value(); });
  if (numeric) {
    std::stable_sort(classes.begin(), classes.end(), [](const std::string& a, const std::string& b) {
      return *parse_number(a) < *parse_number(b);
    });
  }
  std::map<std::string, int> code;
  for (std::size_t j = 0; j < classes.size(); ++j) code[classes[j]] = static_cast<int>(j);
  out.labels.reserve(raw_labels.size());
  for (const auto& s : raw_labels) out.labels.push_back(code.at(s));
  if (classes.size() < 2) warn(warnings, "dataset has a single class");
  out.validate();
  return out;
}

FeatureMatrix load_dataset(const DatasetSpec& spec, Warnings* warnings) {
  std::ifstream in(spec.path);
  if (!in) throw DataError("cannot open dataset file " + spec.path.string());
  FeatureMatrix x;
  try {
    x = parse_csv(in, spec, warnings);
  } catch (const DataError& e) {
    throw DataError(spec.path.filename().string() + ": " + e.what());
  }
  const std::string who = spec.name.empty() ? spec.path.string() : spec.name;
  auto check = [&](const std::optional<int>& want, long got, const char* what) {
    if (want && *want != got) {
      throw DataError(who + ": expected " + std::to_string(*want) + " " + what + ", found " +
                      std::to_string(got));
    }
  };
  check(spec.expected_n, x.samples(), "samples");
  check(spec.expected_d, x.dims(), "features");
  check(spec.expected_c, x.num_classes(), "classes");
  return standardize(x, spec.normalize, warnings);
}

void write_canonical_csv(std::ostream& out, const FeatureMatrix& x) {
  for (Eigen::Index j = 0; j < x.dims(); ++j) {
    out << (x.feature_names.empty() ? "f" + std::to_string(j + 1) : x.feature_names[j]) << ',';
  }
  out << "class\n";
  for (Eigen::Index i = 0; i < x.samples(); ++i) {
    for (Eigen::Index j = 0; j < x.dims(); ++j) out << format_number(x.data(j, i)) << ',';
    out << (x.has_labels() ? x.labels[i] : 0) << '\n';
  }
}

void save_dataset(const std::filesystem::path& path, const FeatureMatrix& x) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  write_canonical_csv(out, x);
}

FeatureMatrix standardize(const FeatureMatrix& x, Normalize mode, Warnings* warnings) {
  FeatureMatrix out = x;
  if (mode == Normalize::none) return out;
  const double n = static_cast<double>(x.samples());
  for (Eigen::Index j = 0; j < x.dims(); ++j) {
    auto row = out.data.row(j);
    if (mode == Normalize::zscore) {
      const double mean = row.mean();
      const double sd = std::sqrt((row.array() - mean).square().sum() / n);
      row = (row.array() - mean) / std::max(sd, 1e-12);
    } else {
      const double lo = row.minCoeff();
      const double hi = row.maxCoeff();
      if (hi > lo) {
        row = (row.array() - lo) / (hi - lo);
      } else {
        row.setZero();
        const std::string name = x.feature_names.empty() ? std::to_string(j) : x.feature_names[j];
        warn(warnings, "constant feature " + name + " mapped to 0");
      }
    }
  }
  return out;
}

Split train_test_split(const FeatureMatrix& x, double ratio, std::uint64_t seed, Warnings* warnings) {
  if (!(ratio > 0.0 && ratio < 1.0)) throw ConfigError("split ratio must lie in (0, 1)");
  if (!x.has_labels()) throw DataError("stratified split needs labels");
  std::map<int, std::vector<int>> by_class;
  for (int i = 0; i < static_cast<int>(x.samples()); ++i) by_class[x.labels[i]].push_back(i);
  Rng rng(seed);
  Split out;
  for (auto& [cls, idx] : by_class) {
    for (std::size_t i = idx.size(); i > 1; --i) {
      std::swap(idx[i - 1], idx[rng.below(i)]);
    }
    if (idx.size() == 1) {
      warn(warnings, "class " + std::to_string(cls) + " has one sample; assigned to train");
      out.train_index.push_back(idx[0]);
      continue;
    }
    const auto take = static_cast<std::size_t>(std::lround(ratio * static_cast<double>(idx.size())));
    for (std::size_t i = 0; i < idx.size(); ++i) {
      (i < take ? out.train_index : out.test_index).push_back(idx[i]);
    }
  }
  std::sort(out.train_index.begin(), out.train_index.end());
  std::sort(out.test_index.begin(), out.test_index.end());
  out.train = subset(x, out.train_index);
  out.test = subset(x, out.test_index);
  return out;
}

SyntheticKind parse_synthetic_kind(const std::string& name) {
  if (name == "two_moon") return SyntheticKind::two_moon;
  if (name == "two_gaussian") return SyntheticKind::two_gaussian;
  if (name == "multi_cluster_36") return SyntheticKind::multi_cluster_36;
  throw ConfigError("unknown synthetic kind '" + name + "'");
}

std::string to_string(SyntheticKind kind) {
  switch (kind) {
    case SyntheticKind::two_moon: return "two_moon";
    case SyntheticKind::two_gaussian: return "two_gaussian";
    case SyntheticKind::multi_cluster_36: return "multi_cluster_36";
  }
  return "two_moon";
}

int SyntheticConfig::clusters() const { return kind == SyntheticKind::multi_cluster_36 ? 36 : 2; }

Matrix multi_cluster_centers() {
  Matrix c(2, 36);
  for (int a = 0; a < 6; ++a) {
    for (int b = 0; b < 6; ++b) {
      c(0, a * 6 + b) = 0.2 * a;
      c(1, a * 6 + b) = 0.2 * b;
    }
  }
  return c;
}

FeatureMatrix generate_synthetic(const SyntheticConfig& cfg) {
  const int c = cfg.clusters();
  if (cfg.n < 2 * c) throw ConfigError("synthetic n must be at least twice the cluster count");
  if (!(cfg.noise >= 0.0)) throw ConfigError("noise must be non-negative");
  Rng rng(cfg.seed);
  FeatureMatrix out;
  out.data.resize(2, cfg.n);
  out.feature_names = {"x", "y"};
  out.labels.resize(static_cast<std::size_t>(cfg.n));

  // Cluster sizes differ by at most one; earlier clusters take the remainder.
  std::vector<int> sizes(static_cast<std::size_t>(c), cfg.n / c);
  for (int j = 0; j < cfg.n % c; ++j) ++sizes[j];

  const Matrix centers = multi_cluster_centers();
  int col = 0;
  for (int j = 0; j < c; ++j) {
    for (int i = 0; i < sizes[j]; ++i, ++col) {
      double px = 0.0;
      double py = 0.0;
      switch (cfg.kind) {
        case SyntheticKind::two_moon: {
          const double t = sizes[j] > 1 ? std::numbers::pi * i / (sizes[j] - 1) : 0.0;
          px = j == 0 ? std::cos(t) : 1.0 - std::cos(t);
          py = j == 0 ? std::sin(t) : 0.5 - std::sin(t);
          break;
        }
        case SyntheticKind::two_gaussian:
          px = j == 0 ? -0.5 * cfg.separation : 0.5 * cfg.separation;
          break;
        case SyntheticKind::multi_cluster_36:
          px = centers(0, j);
          py = centers(1, j);
          break;
      }
      out.data(0, col) = px + cfg.noise * rng.normal();
      out.data(1, col) = py + cfg.noise * rng.normal();
      out.labels[col] = j;
    }
  }
  return out;
}

const std::vector<BuiltinDataset>& builtin_datasets() {
  static const std::vector<BuiltinDataset> table = {
      {"solar", "solar.csv", 322, 12, 6, 12, false},
      {"vehicle", "vehicle.csv", 846, 18, 4, 18, false},
      {"vote", "vote.csv", 434, 16, 2, 16, false},
      {"ecoli", "ecoli.csv", 336, 7, 8, 7, false},
      {"wine", "wine.csv", 178, 13, 3, 13, true},
      {"glass", "glass.csv", 214, 9, 6, 9, false},
      {"lenses", "lenses.csv", 24, 4, 3, 4, true},
      {"heart", "heart.csv", 270, 13, 2, 13, false},
      {"zoo", "zoo.csv", 101, 16, 7, 16, true},
      {"cars", "cars.csv", 392, 8, 3, 7, true},
      {"auto", "auto.csv", 205, 25, 6, 25, true},
      {"balance", "balance.csv", 625, 4, 3, 4, true},
  };
  return table;
}

const BuiltinDataset* find_builtin(const std::string& name) {
  for (const auto& b : builtin_datasets()) {
    if (b.name == name) return &b;
  }
  return nullptr;
}

std::filesystem::path default_data_dir() {
  if (const char* env = std::getenv("DOGC_DATA_DIR"); env != nullptr && *env != '\0') return env;
  return DOGC_SOURCE_DATA_DIR;
}

DatasetSpec builtin_spec(const std::string& name, Normalize normalize,
                         const std::filesystem::path& data_dir) {
  const BuiltinDataset* b = find_builtin(name);
  if (b == nullptr) throw ConfigError("unknown builtin dataset '" + name + "'");
  DatasetSpec spec;
  spec.name = b->name;
  spec.path = data_dir / b->file;
  spec.normalize = normalize;
  spec.expected_n = b->table_n;
  spec.expected_d = b->shipped_d;
  spec.expected_c = b->table_c;
  if (!std::filesystem::exists(spec.path)) {
    throw DataError("dataset '" + name + "' is not available (missing " + spec.path.string() + ")");
  }
  return spec;
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (ctx == nullptr || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1) {
    EVP_MD_CTX_free(ctx);
    throw DataError("SHA-256 initialisation failed");
  }
  char buf[1 << 14];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, digest, &len);
  EVP_MD_CTX_free(ctx);
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) {
    hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  }
  return hex.str();
}

std::vector<ChecksumReport> verify_checksums(const std::filesystem::path& dir) {
  std::ifstream in(dir / "SHA256SUMS");
  if (!in) throw DataError("missing " + (dir / "SHA256SUMS").string());
  std::vector<ChecksumReport> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::istringstream fields(line);
    ChecksumReport r;
    if (!(fields >> r.expected >> r.file)) {
      throw DataError("SHA256SUMS line " + std::to_string(line_no) + " is malformed");
    }
    if (!r.file.empty() && r.file[0] == '*') r.file.erase(0, 1);
    const auto path = dir / r.file;
    if (std::filesystem::exists(path)) {
      r.actual = sha256_file(path);
      r.ok = r.actual == r.expected;
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace dogc
