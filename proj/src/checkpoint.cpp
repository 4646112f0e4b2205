#include "dogc/checkpoint.hpp"

#include <array>
#include <bit>
#include <fstream>
#include <istream>
#include <ostream>

namespace dogc {

namespace {

constexpr std::array<char, 8> kMagic = {'D', 'O', 'G', 'C', 'S', 'T', 'A', 'T'};

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}

  void u8(std::uint8_t v) { out_.put(static_cast<char>(v)); }

  void u32(std::uint32_t v) {
    for (int b = 0; b < 4; ++b) u8(static_cast<std::uint8_t>(v >> (8 * b)));
  }

  void u64(std::uint64_t v) {
    for (int b = 0; b < 8; ++b) u8(static_cast<std::uint8_t>(v >> (8 * b)));
  }

  void i32(std::int32_t v) { u32(static_cast<std::uint32_t>(v)); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }

  void vec(const Vector& v) {
    u64(static_cast<std::uint64_t>(v.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) f64(v(i));
  }

  void mat(const Matrix& m) {
    u64(static_cast<std::uint64_t>(m.rows()));
    u64(static_cast<std::uint64_t>(m.cols()));
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      for (Eigen::Index c = 0; c < m.cols(); ++c) f64(m(r, c));
  }

 private:
  std::ostream& out_;
};

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  std::uint8_t u8() {
    const int c = in_.get();
    if (c == std::char_traits<char>::eof()) throw DataError("checkpoint is truncated");
    return static_cast<std::uint8_t>(c);
  }

  std::uint32_t u32() {
    std::uint32_t v = 0;
    for (int b = 0; b < 4; ++b) v |= static_cast<std::uint32_t>(u8()) << (8 * b);
    return v;
  }

  std::uint64_t u64() {
    std::uint64_t v = 0;
    for (int b = 0; b < 8; ++b) v |= static_cast<std::uint64_t>(u8()) << (8 * b);
    return v;
  }

  std::int32_t i32() { return static_cast<std::int32_t>(u32()); }
  double f64() { return std::bit_cast<double>(u64()); }

  Eigen::Index size(std::uint64_t limit = std::uint64_t{1} << 32) {
    const std::uint64_t v = u64();
    if (v > limit) throw DataError("checkpoint size field is implausible");
    return static_cast<Eigen::Index>(v);
  }

  Vector vec() {
    Vector v(size());
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = f64();
    return v;
  }

  Matrix mat() {
    const Eigen::Index rows = size();
    const Eigen::Index cols = size();
    Matrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
      for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = f64();
    return m;
  }

 private:
  std::istream& in_;
};

}  // namespace

void write_checkpoint(std::ostream& out, const SolverState& st) {
  out.write(kMagic.data(), kMagic.size());
  Writer w(out);
  w.u32(kCheckpointVersion);
  w.u64(st.rng_seed);
  w.i32(st.iteration);
  w.i32(st.hyper.k);
  w.f64(st.hyper.xi);
  w.f64(st.hyper.lambda);
  w.f64(st.hyper.alpha);
  w.f64(st.hyper.beta);
  w.f64(st.hyper.gamma);
  w.f64(st.p);
  w.u8(st.relax_labels ? 1 : 0);
  w.vec(st.hyper.xi_rows);

  SparseRowMatrix s = st.S.weights;
  s.makeCompressed();
  w.i32(st.S.neighbor_count);
  w.u64(static_cast<std::uint64_t>(s.rows()));
  w.u64(static_cast<std::uint64_t>(s.nonZeros()));
  for (Eigen::Index i = 0; i <= s.rows(); ++i) {
    w.u64(static_cast<std::uint64_t>(s.rows() == 0 ? 0 : s.outerIndexPtr()[i]));
  }
  for (Eigen::Index k = 0; k < s.nonZeros(); ++k) w.u64(static_cast<std::uint64_t>(s.innerIndexPtr()[k]));
  for (Eigen::Index k = 0; k < s.nonZeros(); ++k) w.f64(s.valuePtr()[k]);

  w.mat(st.F.F);
  w.mat(st.Q.Q);
  w.mat(st.W.W);
  w.i32(st.Y.clusters);
  w.u64(st.Y.labels.size());
  for (int v : st.Y.labels) w.i32(v);

  w.u8(st.P.has_value() ? 1 : 0);
  if (st.P) {
    w.mat(st.P->P);
    w.f64(st.P->p);
    w.f64(st.P->gamma);
  }
  w.u8(st.D.has_value() ? 1 : 0);
  if (st.D) {
    w.vec(st.D->diagonal);
    w.f64(st.D->epsilon_floor);
  }

  w.u64(st.objective_trace.size());
  for (double v : st.objective_trace) w.f64(v);
  w.u64(st.sweeps.size());
  for (const auto& r : st.sweeps) {
    w.i32(r.sweep);
    w.f64(r.objective_before);
    w.f64(r.objective_after);
    w.f64(r.lambda);
    w.i32(r.components);
    w.u8(r.labels_changed ? 1 : 0);
  }
  if (!out) throw DataError("failed to write checkpoint");
}

SolverState read_checkpoint(std::istream& in) {
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw DataError("not a solver checkpoint");
  Reader r(in);
  const std::uint32_t version = r.u32();
  if (version != kCheckpointVersion) {
    throw DataError("unsupported checkpoint version " + std::to_string(version));
  }
  SolverState st;
  st.rng_seed = r.u64();
  st.iteration = r.i32();
  st.hyper.k = r.i32();
  st.hyper.xi = r.f64();
  st.hyper.lambda = r.f64();
  st.hyper.alpha = r.f64();
  st.hyper.beta = r.f64();
  st.hyper.gamma = r.f64();
  st.p = r.f64();
  st.relax_labels = r.u8() != 0;
  st.hyper.xi_rows = r.vec();

  st.S.neighbor_count = r.i32();
  const Eigen::Index n = r.size();
  const Eigen::Index nnz = r.size();
  std::vector<std::uint64_t> ptr(static_cast<std::size_t>(n) + 1);
  for (auto& p : ptr) p = r.u64();
  std::vector<std::uint64_t> cols(static_cast<std::size_t>(nnz));
  for (auto& c : cols) c = r.u64();
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(cols.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    if (ptr[i] > ptr[i + 1] || ptr[i + 1] > static_cast<std::uint64_t>(nnz)) {
      throw DataError("checkpoint graph row pointers are inconsistent");
    }
  }
  std::vector<double> values(static_cast<std::size_t>(nnz));
  for (auto& v : values) v = r.f64();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (std::uint64_t k = ptr[i]; k < ptr[i + 1]; ++k) {
      if (cols[k] >= static_cast<std::uint64_t>(n)) throw DataError("checkpoint column index out of range");
      entries.emplace_back(i, static_cast<Eigen::Index>(cols[k]), values[k]);
    }
  }
  st.S.weights.resize(n, n);
  st.S.weights.setFromTriplets(entries.begin(), entries.end());
  st.S.weights.makeCompressed();

  st.F.F = r.mat();
  st.Q.Q = r.mat();
  st.W.W = r.mat();
  const int clusters = r.i32();
  std::vector<int> labels(static_cast<std::size_t>(r.size()));
  for (auto& v : labels) v = r.i32();
  if (clusters > 0) {
    st.Y = DiscreteLabels(std::move(labels), clusters);
  } else if (!labels.empty()) {
    throw DataError("checkpoint labels without a cluster count");
  }

  if (r.u8() != 0) {
    Predictor p;
    p.P = r.mat();
    p.p = r.f64();
    p.gamma = r.f64();
    st.P = std::move(p);
  }
  if (r.u8() != 0) {
    IrlsWeights d;
    d.diagonal = r.vec();
    d.epsilon_floor = r.f64();
    st.D = std::move(d);
  }
  st.objective_trace.resize(static_cast<std::size_t>(r.size()));
  for (auto& v : st.objective_trace) v = r.f64();
  st.sweeps.resize(static_cast<std::size_t>(r.size()));
  for (auto& rec : st.sweeps) {
    rec.sweep = r.i32();
    rec.objective_before = r.f64();
    rec.objective_after = r.f64();
    rec.lambda = r.f64();
    rec.components = r.i32();
    rec.labels_changed = r.u8() != 0;
  }
  return st;
}

void save_checkpoint(const std::filesystem::path& path, const SolverState& state) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  write_checkpoint(out, state);
}

SolverState load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  return read_checkpoint(in);
}

}  // namespace dogc
