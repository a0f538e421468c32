#pragma once

#include <vector>

#include "mapper/lenses.hpp"
#include "mapper/numeric.hpp"

namespace mapper {

struct CoverSpec {
  int k = 1;            // lens dimension, 1 or 2
  int r = 40;           // intervals per dimension
  double epsilon = 0.3; // overlap fraction, 0 <= epsilon < 1
};

// Hyperrectangle bin: base interval [i/r, (i+1)/r] per dimension expanded by
// epsilon/(2r) on each side; both ends closed; not clipped to [0, 1].
struct Bin {
  std::vector<int> index;     // k interval indices
  std::vector<double> lower;  // expanded bounds
  std::vector<double> upper;
};

// All r^k bins in row-major order of the index tuple.
std::vector<Bin> build_cover(const CoverSpec& spec);

inline int linear_bin_index(const std::vector<int>& index, int r) {
  int idx = 0;
  for (int v : index) idx = idx * r + v;
  return idx;
}

// Per-instance sorted list of linear bin indices containing the lens value.
// Every value in [0,1]^k lands in at least one bin and in at most two
// consecutive intervals per dimension.
std::vector<std::vector<int>> assign_bins(const LensValues& values,
                                          const std::vector<Bin>& bins,
                                          const CoverSpec& spec);

// Total expanded measure sum over bins: r^k * ((1+epsilon)/r)^k; strictly
// increasing in epsilon for fixed r.
double expanded_measure(const CoverSpec& spec);

}  // namespace mapper
