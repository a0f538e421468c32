#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace mapper {

// Row-major storage: instance rows are contiguous, which every per-row
// operation in the pipeline (normalization, bin gathers, lens kernels) wants.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// Thrown for malformed inputs and bad configuration; the CLI maps it to exit
// code 1 (runtime failures keep plain std::runtime_error and map to 2).
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Cosine distance 1 - cos(a, b), clamped to [0, 2]. Throws on zero-norm input.
template <typename DerivedA, typename DerivedB>
double cosine_distance(const Eigen::MatrixBase<DerivedA>& a,
                       const Eigen::MatrixBase<DerivedB>& b) {
  const double na = a.norm(), nb = b.norm();
  if (na == 0.0 || nb == 0.0)
    throw ValidationError("cosine distance undefined for zero-norm vector");
  const double c = a.dot(b) / (na * nb);
  return std::min(2.0, std::max(0.0, 1.0 - c));
}

// Rows scaled to unit L2 norm. Throws naming the offending row when a row has
// zero norm; `what` names the matrix in the message (e.g. "train row").
template <typename Derived>
Matrix normalized_rows(const Eigen::MatrixBase<Derived>& m, const std::string& what) {
  Matrix out(m.rows(), m.cols());
  for (Index i = 0; i < m.rows(); ++i) {
    const double n = m.row(i).norm();
    if (n == 0.0)
      throw ValidationError("zero-norm vector at " + what + " " + std::to_string(i));
    out.row(i) = m.row(i) / n;
  }
  return out;
}

// Min-max rescale of one value with clamping; degenerate bounds map to 0.5.
inline double rescale_unit(double v, double lo, double hi) {
  if (lo == hi) return 0.5;
  return std::min(1.0, std::max(0.0, (v - lo) / (hi - lo)));
}

// SplitMix64 step; the stream derivation below hashes a label into a seed so
// each randomized lens draws from its own substream of the run seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_stream(std::uint64_t seed, const std::string& name) {
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a over the stream name
  for (unsigned char c : name) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return splitmix64(seed ^ h);
}

}  // namespace mapper
