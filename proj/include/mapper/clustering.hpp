#pragma once

#include <vector>

#include "mapper/dataset.hpp"
#include "mapper/numeric.hpp"

namespace mapper {

enum class Metric { Cosine, Euclidean };

std::string to_string(Metric m);
Metric parse_metric(const std::string& s);

struct ClusteringParams {
  int min_cluster_size = 2;
  int min_samples = 2;  // counts the point itself; 2 -> nearest other point
  Metric metric = Metric::Cosine;
};

inline constexpr int kNoise = -1;

// Dense pairwise distance matrix over point rows. Cosine entries lie in
// [0, 2] with an exactly zero diagonal; zero-norm rows throw under cosine.
Matrix pairwise_distance(const Eigen::Ref<const Matrix>& points, Metric metric);

// Density clustering: core distances -> mutual reachability -> minimum
// spanning tree -> merge hierarchy (equal-weight merges collapsed) ->
// excess-of-mass extraction over every node of size >= min_cluster_size,
// the root included. Returns one label per row, kNoise for unclustered
// points; cluster ids are dense, ordered by smallest member index.
std::vector<int> hdbscan_labels(const Eigen::Ref<const Matrix>& points,
                                const ClusteringParams& params);

struct BinClustering {
  int bin = 0;                // linear bin index
  std::vector<int> members;   // dataset row indices, ascending
  std::vector<int> labels;    // parallel to members; kNoise or cluster id
  int n_clusters = 0;
};

// One BinClustering per nonempty bin, in bin order. Bins smaller than
// max(min_cluster_size, min_samples) come back all-noise.
std::vector<BinClustering> cluster_all_bins(const EmbeddingDataset& ds,
                                            const std::vector<std::vector<int>>& assignments,
                                            const ClusteringParams& params);

// Fraction of instances labeled noise in every bin that contains them.
double noise_rate(Index n_instances, const std::vector<BinClustering>& clusterings);

}  // namespace mapper
