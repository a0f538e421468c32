#include "mapper/cover.hpp"

#include <algorithm>
#include <cmath>

namespace mapper {

namespace {

void check_spec(const CoverSpec& spec) {
  if (spec.k < 1 || spec.k > 2)
    throw ValidationError("cover dimension must be 1 or 2, got " + std::to_string(spec.k));
  if (spec.r < 1)
    throw ValidationError("resolution must be >= 1, got " + std::to_string(spec.r));
  if (!(spec.epsilon >= 0.0 && spec.epsilon < 1.0))
    throw ValidationError("overlap must satisfy 0 <= epsilon < 1, got " +
                          std::to_string(spec.epsilon));
}

}  // namespace

std::vector<Bin> build_cover(const CoverSpec& spec) {
  check_spec(spec);
  const double r = spec.r;
  const double pad = spec.epsilon / (2.0 * r);
  auto lower = [&](int i) { return i / r - pad; };
  auto upper = [&](int i) { return (i + 1) / r + pad; };

  std::vector<Bin> bins;
  const int total = spec.k == 1 ? spec.r : spec.r * spec.r;
  bins.reserve(static_cast<size_t>(total));
  if (spec.k == 1) {
    for (int i = 0; i < spec.r; ++i)
      bins.push_back({{i}, {lower(i)}, {upper(i)}});
  } else {
    for (int i = 0; i < spec.r; ++i)
      for (int j = 0; j < spec.r; ++j)
        bins.push_back({{i, j}, {lower(i), lower(j)}, {upper(i), upper(j)}});
  }
  return bins;
}

std::vector<std::vector<int>> assign_bins(const LensValues& values, const std::vector<Bin>& bins,
                                          const CoverSpec& spec) {
  check_spec(spec);
  if (values.k != spec.k)
    throw std::runtime_error("lens dimension " + std::to_string(values.k) +
                             " does not match cover dimension " + std::to_string(spec.k));

  // Candidate intervals per dimension: the base interval under v plus its
  // neighbors, tested against the stored closed bounds. Expanded width
  // (1+eps)/r < 2/r keeps membership to at most two consecutive intervals.
  auto intervals_for = [&](double v, int dim) {
    std::vector<int> out;
    const int i0 = std::min(spec.r - 1, std::max(0, static_cast<int>(std::floor(v * spec.r))));
    for (int c = std::max(0, i0 - 1); c <= std::min(spec.r - 1, i0 + 1); ++c) {
      const size_t probe = spec.k == 1 ? static_cast<size_t>(c)
                                       : static_cast<size_t>(c * spec.r);  // dim-0 varies first
      const size_t idx = dim == 0 ? probe : static_cast<size_t>(c);
      if (v >= bins[idx].lower[static_cast<size_t>(dim)] &&
          v <= bins[idx].upper[static_cast<size_t>(dim)])
        out.push_back(c);
    }
    return out;
  };

  std::vector<std::vector<int>> assignments(static_cast<size_t>(values.values.rows()));
  for (Index p = 0; p < values.values.rows(); ++p) {
    auto& slot = assignments[static_cast<size_t>(p)];
    const auto d0 = intervals_for(values.values(p, 0), 0);
    if (spec.k == 1) {
      slot = d0;
    } else {
      const auto d1 = intervals_for(values.values(p, 1), 1);
      for (int i : d0)
        for (int j : d1) slot.push_back(i * spec.r + j);
    }
    std::sort(slot.begin(), slot.end());
  }
  return assignments;
}

double expanded_measure(const CoverSpec& spec) {
  check_spec(spec);
  const double width = (1.0 + spec.epsilon) / spec.r;
  const double per_dim = spec.r * width;
  return spec.k == 1 ? per_dim : per_dim * per_dim;
}

}  // namespace mapper
