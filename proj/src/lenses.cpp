#include "mapper/lenses.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <unordered_map>

namespace mapper {

namespace {

struct KindInfo {
  LensKind kind;
  const char* name;
  int dims;
};

constexpr KindInfo kKinds[] = {
    {LensKind::Centroid1d, "centroid_1d", 1},
    {LensKind::Pca1d, "pca_1d", 1},
    {LensKind::Eccentricity1d, "eccentricity_1d", 1},
    {LensKind::L2Norm1d, "l2norm_1d", 1},
    {LensKind::Random1_1d, "random1_1d", 1},
    {LensKind::Random2_1d, "random2_1d", 1},
    {LensKind::CosineC0C1, "cosine_c0_c1", 2},
    {LensKind::Eccentricity2d, "eccentricity_2d", 2},
    {LensKind::Pca2d, "pca_2d", 2},
    {LensKind::Random2d, "random_2d", 2},
    {LensKind::External2d, "external_2d", 2},
};

const KindInfo& info(LensKind kind) {
  for (const auto& k : kKinds)
    if (k.kind == kind) return k;
  throw std::runtime_error("unreachable lens kind");
}

// Deterministic standard normals: Box-Muller over mt19937_64 uniforms, so
// draws depend only on the derived stream seed.
class NormalDraw {
 public:
  explicit NormalDraw(std::uint64_t seed) : rng_(seed) {}
  double operator()() {
    const double u1 = (static_cast<double>(rng_() >> 11) + 1.0) * 0x1.0p-53;  // (0,1]
    const double u2 = static_cast<double>(rng_() >> 11) * 0x1.0p-53;          // [0,1)
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 rng_;
};

Vector unit_random_direction(Index d, std::uint64_t stream_seed) {
  NormalDraw draw(stream_seed);
  Vector v(d);
  for (Index i = 0; i < d; ++i) v(i) = draw();
  const double n = v.norm();
  if (n == 0.0) throw std::runtime_error("degenerate random direction draw");
  return v / n;
}

// Largest-magnitude coefficient made positive; ties broken by lowest index.
void fix_sign(Vector& v) {
  Index best = 0;
  for (Index i = 1; i < v.size(); ++i)
    if (std::abs(v(i)) > std::abs(v(best))) best = i;
  if (v(best) < 0) v = -v;
}

Vector normalized_or_throw(const Vector& v, const std::string& what) {
  const double n = v.norm();
  if (n == 0.0) throw std::runtime_error("degenerate lens: zero-norm " + what);
  return v / n;
}

// Raw (unscaled) lens values for every internal kind; one code path shared by
// the fit-time bounds pass and test-time evaluation.
Matrix raw_lens_values(const Matrix& X, LensKind kind, const TrainStatistics& s,
                       const std::string& side) {
  const Index n = X.rows();
  switch (kind) {
    case LensKind::Centroid1d: {
      const Vector dir = normalized_or_throw(s.mu1 - s.mu0, "centroid difference");
      return X * dir;
    }
    case LensKind::Pca1d:
      return X * s.pcs.col(0);
    case LensKind::Pca2d: {
      if (s.pcs.col(1).norm() == 0.0)
        throw std::runtime_error("pca_2d requires at least 2 embedding dimensions");
      return X * s.pcs;
    }
    case LensKind::L2Norm1d: {
      Matrix out(n, 1);
      out.col(0) = X.rowwise().norm();
      return out;
    }
    case LensKind::Random1_1d:
      return X * s.rand_dirs.col(0);
    case LensKind::Random2_1d:
      return X * s.rand_dirs.col(1);
    case LensKind::Random2d:
      return X * s.rand_dirs;
    case LensKind::Eccentricity1d:
    case LensKind::Eccentricity2d: {
      const Matrix Xn = normalized_rows(X, side + " row");
      const Matrix& T = s.train_normalized;
      const int k = kind == LensKind::Eccentricity1d ? 1 : 2;
      Matrix out(n, k);
      const Index block = 256;
      for (Index b = 0; b < n; b += block) {
        const Index len = std::min(block, n - b);
        const Matrix sim = Xn.middleRows(b, len) * T.transpose();
        for (Index i = 0; i < len; ++i) {
          out(b + i, 0) = std::min(2.0, std::max(0.0, 1.0 - sim.row(i).minCoeff()));
          if (k == 2)
            out(b + i, 1) = std::min(2.0, std::max(0.0, 1.0 - sim.row(i).mean()));
        }
      }
      return out;
    }
    case LensKind::CosineC0C1: {
      const Matrix Xn = normalized_rows(X, side + " row");
      const Vector c0 = normalized_or_throw(s.mu0, "class-0 centroid");
      const Vector c1 = normalized_or_throw(s.mu1, "class-1 centroid");
      Matrix out(n, 2);
      out.col(0) = (1.0 - (Xn * c0).array()).cwiseMin(2.0).cwiseMax(0.0);
      out.col(1) = (1.0 - (Xn * c1).array()).cwiseMin(2.0).cwiseMax(0.0);
      return out;
    }
    case LensKind::External2d:
      throw std::runtime_error("external_2d has no internal kernel");
  }
  throw std::runtime_error("unreachable lens kind");
}

}  // namespace

int LensSpec::dims() const { return info(kind).dims; }

std::string LensSpec::name() const { return info(kind).name; }

LensSpec LensSpec::parse(const std::string& token) {
  std::string name = token, arg;
  if (const auto eq = token.find('='); eq != std::string::npos) {
    name = token.substr(0, eq);
    arg = token.substr(eq + 1);
  }
  for (const auto& k : kKinds) {
    if (name != k.name) continue;
    LensSpec spec;
    spec.kind = k.kind;
    if (k.kind == LensKind::External2d) {
      if (arg.empty())
        throw ValidationError("external_2d needs a coordinate file: external_2d=coords.csv");
      spec.external_path = arg;
    } else if (!arg.empty()) {
      throw ValidationError("lens '" + name + "' takes no argument");
    }
    return spec;
  }
  throw ValidationError("unknown lens '" + name + "'");
}

const std::vector<LensKind>& all_lens_kinds() {
  static const std::vector<LensKind> kinds = [] {
    std::vector<LensKind> v;
    for (const auto& k : kKinds) v.push_back(k.kind);
    return v;
  }();
  return kinds;
}

const std::vector<LensKind>& default_lens_kinds() {
  static const std::vector<LensKind> kinds = {
      LensKind::Centroid1d,  LensKind::Pca1d,      LensKind::Eccentricity1d,
      LensKind::L2Norm1d,    LensKind::Random1_1d, LensKind::Random2_1d,
  };
  return kinds;
}

TrainStatistics fit_train_stats(const EmbeddingDataset& train, std::uint64_t seed) {
  std::vector<LensKind> kinds;
  for (const auto& k : kKinds) {
    if (k.kind == LensKind::External2d) continue;
    if (k.kind == LensKind::Pca2d && train.dim() < 2) continue;
    kinds.push_back(k.kind);
  }
  return fit_train_stats(train, seed, kinds);
}

TrainStatistics fit_train_stats(const EmbeddingDataset& train, std::uint64_t seed,
                                const std::vector<LensKind>& kinds) {
  if (train.size() == 0) throw std::runtime_error("cannot fit train statistics on empty data");
  const Index n = train.size(), d = train.dim();
  const Matrix& X = train.embeddings();

  TrainStatistics s;
  s.seed = seed;

  Index n0 = 0, n1 = 0;
  s.mu0 = Vector::Zero(d);
  s.mu1 = Vector::Zero(d);
  for (Index i = 0; i < n; ++i) {
    if (train.label(i).gold == 0) {
      s.mu0 += X.row(i);
      ++n0;
    } else {
      s.mu1 += X.row(i);
      ++n1;
    }
  }
  if (n0 == 0 || n1 == 0)
    throw std::runtime_error("gold class " + std::string(n0 == 0 ? "0" : "1") +
                             " absent from training data (centroid undefined)");
  s.mu0 /= static_cast<double>(n0);
  s.mu1 /= static_cast<double>(n1);

  const Eigen::RowVectorXd mean = X.colwise().mean();
  const Matrix centered = X.rowwise() - mean;
  const Eigen::MatrixXd cov = centered.transpose() * centered;
  if (!(cov.trace() > 0.0))
    throw std::runtime_error("zero total variance in training data (PCA undefined)");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("eigendecomposition of the train covariance failed");
  s.pcs = Matrix::Zero(d, 2);
  Vector pc = es.eigenvectors().col(d - 1);  // eigenvalues ascend in Eigen
  fix_sign(pc);
  s.pcs.col(0) = pc;
  if (d >= 2) {
    pc = es.eigenvectors().col(d - 2);
    fix_sign(pc);
    s.pcs.col(1) = pc;
  }

  s.rand_dirs = Matrix(d, 2);
  s.rand_dirs.col(0) = unit_random_direction(d, derive_stream(seed, "random1"));
  s.rand_dirs.col(1) = unit_random_direction(d, derive_stream(seed, "random2"));

  // Normalized train rows exist only for the eccentricity kernels; computing
  // them unconditionally would make every fit fail on a zero-norm row.
  const bool needs_train_rows =
      std::find(kinds.begin(), kinds.end(), LensKind::Eccentricity1d) != kinds.end() ||
      std::find(kinds.begin(), kinds.end(), LensKind::Eccentricity2d) != kinds.end();
  if (needs_train_rows) s.train_normalized = normalized_rows(X, "train row");

  for (LensKind kind : kinds) {
    if (kind == LensKind::External2d) continue;
    const Matrix raw = raw_lens_values(X, kind, s, "train");
    std::vector<ScaleBounds> bounds(static_cast<size_t>(raw.cols()));
    for (Index j = 0; j < raw.cols(); ++j)
      bounds[static_cast<size_t>(j)] = {raw.col(j).minCoeff(), raw.col(j).maxCoeff()};
    s.scale_bounds[kind] = std::move(bounds);
  }
  return s;
}

double lens_centroid(const Eigen::Ref<const Vector>& x, const TrainStatistics& s) {
  return x.dot(normalized_or_throw(s.mu1 - s.mu0, "centroid difference"));
}

double lens_pca(const Eigen::Ref<const Vector>& x, const TrainStatistics& s, int component) {
  return x.dot(s.pcs.col(component));
}

double lens_eccentricity(const Eigen::Ref<const Vector>& x, const TrainStatistics& s) {
  const double n = x.norm();
  if (n == 0.0) throw std::runtime_error("zero-norm vector at eccentricity query");
  const double best = (s.train_normalized * (x / n)).minCoeff();
  return std::min(2.0, std::max(0.0, 1.0 - best));
}

double lens_l2norm(const Eigen::Ref<const Vector>& x) { return x.norm(); }

double lens_random(const Eigen::Ref<const Vector>& x, const TrainStatistics& s, int which) {
  return x.dot(s.rand_dirs.col(which));
}

namespace {

Matrix external_coordinates(const EmbeddingDataset& ds, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open coordinate file: " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("empty coordinate file " + path.string());
  auto strip_cr = [](std::string s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
    return s;
  };
  if (strip_cr(line) != "id,x0,x1")
    throw ValidationError("malformed header in " + path.string() + ": expected id,x0,x1");

  std::unordered_map<std::string, std::pair<double, double>> rows;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    line = strip_cr(line);
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string id, a, b;
    if (!std::getline(ss, id, ',') || !std::getline(ss, a, ',') || !std::getline(ss, b))
      throw ValidationError("malformed row " + std::to_string(lineno) + " in " + path.string());
    double x0, x1;
    try {
      size_t p0 = 0, p1 = 0;
      x0 = std::stod(a, &p0);
      x1 = std::stod(b, &p1);
      if (p0 != a.size() || p1 != b.size()) throw std::invalid_argument(line);
    } catch (const std::exception&) {
      throw ValidationError("malformed coordinates at row " + std::to_string(lineno) + " in " +
                            path.string());
    }
    if (!std::isfinite(x0) || !std::isfinite(x1))
      throw ValidationError("non-finite coordinate at row " + std::to_string(lineno) + " in " +
                            path.string());
    if (!rows.emplace(id, std::make_pair(x0, x1)).second)
      throw ValidationError("duplicate id '" + id + "' in " + path.string());
    ++lineno;
  }
  if (rows.size() != static_cast<size_t>(ds.size()))
    throw ValidationError("coordinate file " + path.string() + " has " +
                          std::to_string(rows.size()) + " rows but the dataset has " +
                          std::to_string(ds.size()));

  Matrix out(ds.size(), 2);
  for (Index i = 0; i < ds.size(); ++i) {
    auto it = rows.find(ds.label(i).id);
    if (it == rows.end())
      throw ValidationError("coordinate file " + path.string() + " is missing id '" +
                            ds.label(i).id + "'");
    out(i, 0) = it->second.first;
    out(i, 1) = it->second.second;
  }
  return out;
}

}  // namespace

LensValues evaluate_lens(const EmbeddingDataset& ds, const LensSpec& spec,
                         const TrainStatistics& stats) {
  LensValues out;
  out.k = spec.dims();

  Matrix raw;
  std::vector<ScaleBounds> bounds;
  if (spec.kind == LensKind::External2d) {
    raw = external_coordinates(ds, spec.external_path);
    // Externally supplied coordinates carry no train-side statistic; their own
    // per-dimension extent plays the role of the fitted bounds.
    for (Index j = 0; j < raw.cols(); ++j)
      bounds.push_back({ds.size() > 0 ? raw.col(j).minCoeff() : 0.0,
                        ds.size() > 0 ? raw.col(j).maxCoeff() : 0.0});
  } else {
    raw = raw_lens_values(ds.embeddings(), spec.kind, stats, "test");
    auto it = stats.scale_bounds.find(spec.kind);
    if (it == stats.scale_bounds.end())
      throw std::runtime_error("no scale bounds fitted for lens " + spec.name());
    bounds = it->second;
  }

  out.values.resize(raw.rows(), raw.cols());
  for (Index j = 0; j < raw.cols(); ++j) {
    const auto& b = bounds[static_cast<size_t>(j)];
    for (Index i = 0; i < raw.rows(); ++i)
      out.values(i, j) = rescale_unit(raw(i, j), b.lo, b.hi);
  }
  return out;
}

}  // namespace mapper
