#include "mapper/graph.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace mapper {

std::string to_string(NodeClass c) {
  switch (c) {
    case NodeClass::Class0: return "0";
    case NodeClass::Class1: return "1";
    case NodeClass::Mixed: return "mixed";
  }
  throw std::runtime_error("unreachable node class");
}

MapperGraph build_graph(const std::vector<BinClustering>& clusterings) {
  MapperGraph g;

  // Nodes in (bin, cluster) order regardless of input order.
  std::vector<const BinClustering*> ordered;
  ordered.reserve(clusterings.size());
  for (const auto& bc : clusterings) ordered.push_back(&bc);
  std::sort(ordered.begin(), ordered.end(),
            [](const BinClustering* a, const BinClustering* b) { return a->bin < b->bin; });

  for (const BinClustering* bc : ordered) {
    std::vector<std::vector<int>> members(static_cast<size_t>(bc->n_clusters));
    for (size_t i = 0; i < bc->members.size(); ++i)
      if (bc->labels[i] != kNoise)
        members[static_cast<size_t>(bc->labels[i])].push_back(bc->members[i]);
    for (int c = 0; c < bc->n_clusters; ++c) {
      MapperNode node;
      node.id = static_cast<int>(g.nodes.size());
      node.bin = bc->bin;
      node.cluster = c;
      node.members = std::move(members[static_cast<size_t>(c)]);
      std::sort(node.members.begin(), node.members.end());
      g.nodes.push_back(std::move(node));
    }
  }

  // An instance sits in at most one cluster per bin, so the nodes containing
  // it are few; shared-member edges fall out of the per-instance node lists.
  std::map<int, std::vector<int>> nodes_of_instance;
  for (const auto& node : g.nodes)
    for (int p : node.members) nodes_of_instance[p].push_back(node.id);

  std::map<std::pair<int, int>, int> shared;
  for (const auto& [p, ids] : nodes_of_instance)
    for (size_t i = 0; i < ids.size(); ++i)
      for (size_t j = i + 1; j < ids.size(); ++j)
        ++shared[{std::min(ids[i], ids[j]), std::max(ids[i], ids[j])}];
  for (const auto& [key, count] : shared) g.edges.push_back({key.first, key.second, count});

  std::vector<int> parent(g.nodes.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int a) {
    while (parent[static_cast<size_t>(a)] != a) {
      parent[static_cast<size_t>(a)] = parent[static_cast<size_t>(parent[static_cast<size_t>(a)])];
      a = parent[static_cast<size_t>(a)];
    }
    return a;
  };
  for (const auto& edge : g.edges) parent[static_cast<size_t>(find(edge.a))] = find(edge.b);

  std::map<int, std::vector<int>> by_root;
  for (const auto& node : g.nodes) by_root[find(node.id)].push_back(node.id);
  std::vector<std::vector<int>> components;
  for (auto& [/*root*/ _, ids] : by_root) {
    std::sort(ids.begin(), ids.end());
    components.push_back(std::move(ids));
  }
  std::sort(components.begin(), components.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  g.components = std::move(components);
  return g;
}

NodeClass node_majority(const MapperNode& node, const EmbeddingDataset& ds,
                        LabelChannel channel) {
  int count0 = 0, count1 = 0;
  for (int p : node.members) {
    const LabelRecord& rec = ds.label(p);
    int value;
    if (channel == LabelChannel::Gold) {
      value = rec.gold;
    } else {
      if (!rec.pred)
        throw std::runtime_error("pred label requested but absent for instance '" + rec.id + "'");
      value = *rec.pred;
    }
    (value == 0 ? count0 : count1)++;
  }
  if (count0 == count1) return NodeClass::Mixed;
  return count0 > count1 ? NodeClass::Class0 : NodeClass::Class1;
}

std::vector<int> component_points(const std::vector<int>& component, const MapperGraph& graph) {
  std::vector<int> out;
  for (int id : component) {
    const auto& members = graph.nodes[static_cast<size_t>(id)].members;
    out.insert(out.end(), members.begin(), members.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace mapper
