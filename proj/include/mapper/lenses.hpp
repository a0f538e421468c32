#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "mapper/dataset.hpp"
#include "mapper/numeric.hpp"

namespace mapper {

enum class LensKind {
  Centroid1d,
  Pca1d,
  Eccentricity1d,
  L2Norm1d,
  Random1_1d,
  Random2_1d,
  CosineC0C1,
  Eccentricity2d,
  Pca2d,
  Random2d,
  External2d,
};

struct LensSpec {
  LensKind kind = LensKind::Centroid1d;
  std::filesystem::path external_path;  // External2d only

  int dims() const;
  std::string name() const;
  // Token forms: "centroid_1d", ..., "external_2d=coords.csv".
  static LensSpec parse(const std::string& token);
};

const std::vector<LensKind>& all_lens_kinds();
const std::vector<LensKind>& default_lens_kinds();  // the six 1D lenses

struct ScaleBounds {
  double lo = 0.0;
  double hi = 0.0;
};

// Everything a lens evaluation needs that must come from the training split:
// class centroids, principal directions, retained (normalized) train vectors
// for eccentricity, seeded random directions, and per-lens value bounds.
struct TrainStatistics {
  Vector mu0, mu1;
  Matrix pcs;               // d x 2, columns u1, u2 (u2 zero when d == 1)
  Matrix train_normalized;  // unit rows, for eccentricity kernels
  Matrix rand_dirs;         // d x 2 unit columns, one substream per lens
  std::map<LensKind, std::vector<ScaleBounds>> scale_bounds;
  std::uint64_t seed = 0;
};

// Fits on the training split only. `kinds` selects which lenses get scale
// bounds (default: every internal kind representable for this dimension).
TrainStatistics fit_train_stats(const EmbeddingDataset& train, std::uint64_t seed);
TrainStatistics fit_train_stats(const EmbeddingDataset& train, std::uint64_t seed,
                                const std::vector<LensKind>& kinds);

// Raw (unscaled) lens kernels.
double lens_centroid(const Eigen::Ref<const Vector>& x, const TrainStatistics& s);
double lens_pca(const Eigen::Ref<const Vector>& x, const TrainStatistics& s, int component);
double lens_eccentricity(const Eigen::Ref<const Vector>& x, const TrainStatistics& s);
double lens_l2norm(const Eigen::Ref<const Vector>& x);
double lens_random(const Eigen::Ref<const Vector>& x, const TrainStatistics& s, int which);

struct LensValues {
  Matrix values;  // n x k, every coordinate in [0, 1]
  int k = 1;
};

// Raw values rescaled per dimension by the train-fitted bounds, clamped.
LensValues evaluate_lens(const EmbeddingDataset& ds, const LensSpec& spec,
                         const TrainStatistics& stats);

}  // namespace mapper
