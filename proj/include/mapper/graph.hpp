#pragma once

#include <vector>

#include "mapper/clustering.hpp"
#include "mapper/dataset.hpp"

namespace mapper {

struct MapperNode {
  int id = 0;
  int bin = 0;      // linear bin index
  int cluster = 0;  // cluster id within the bin
  std::vector<int> members;  // dataset row indices, ascending
};

struct MapperEdge {
  int a = 0, b = 0;  // node ids, a < b
  int shared = 0;    // |members(a) ∩ members(b)|
};

struct MapperGraph {
  std::vector<MapperNode> nodes;             // ordered by (bin, cluster)
  std::vector<MapperEdge> edges;             // ordered by (a, b)
  std::vector<std::vector<int>> components;  // node ids; ordered by smallest id
};

// Nerve of the clustered cover: one node per bin cluster, an edge wherever
// two nodes share at least one instance, components via union-find.
MapperGraph build_graph(const std::vector<BinClustering>& clusterings);

enum class LabelChannel { Gold, Pred };
enum class NodeClass { Class0, Class1, Mixed };

std::string to_string(NodeClass c);

// Strict-majority label of a node's members; ties are Mixed. Throws when a
// member lacks the requested channel.
NodeClass node_majority(const MapperNode& node, const EmbeddingDataset& ds, LabelChannel channel);

// Multiset of member rows across a component's nodes (instances shared by
// several nodes appear once per node), sorted ascending.
std::vector<int> component_points(const std::vector<int>& component, const MapperGraph& graph);

}  // namespace mapper
