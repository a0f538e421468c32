#include "mapper/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace mapper {

namespace {

// Majority over a component's member multiset; ties are Mixed, mirroring the
// node-level rule.
NodeClass multiset_majority(const std::vector<int>& points, const EmbeddingDataset& ds,
                            LabelChannel channel) {
  int count0 = 0, count1 = 0;
  for (int p : points) {
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

}  // namespace

double component_purity(const std::vector<int>& component, const MapperGraph& graph,
                        const EmbeddingDataset& ds, LabelChannel channel) {
  const std::vector<int> points = component_points(component, graph);
  if (points.empty()) throw std::runtime_error("component purity undefined for empty component");
  int count1 = 0;
  for (int p : points) {
    const LabelRecord& rec = ds.label(p);
    if (channel == LabelChannel::Gold) {
      count1 += rec.gold;
    } else {
      if (!rec.pred)
        throw std::runtime_error("pred label requested but absent for instance '" + rec.id + "'");
      count1 += *rec.pred;
    }
  }
  const int count0 = static_cast<int>(points.size()) - count1;
  // Dominant label; exact ties go to label 1 (either choice gives 0.5).
  const int dominant = count1 >= count0 ? count1 : count0;
  return static_cast<double>(dominant) / static_cast<double>(points.size());
}

std::optional<double> edge_agreement(const MapperGraph& graph, const EmbeddingDataset& ds) {
  if (graph.edges.empty()) return std::nullopt;
  int agreeing = 0;
  for (const auto& edge : graph.edges) {
    const NodeClass a = node_majority(graph.nodes[static_cast<size_t>(edge.a)], ds, LabelChannel::Gold);
    const NodeClass b = node_majority(graph.nodes[static_cast<size_t>(edge.b)], ds, LabelChannel::Gold);
    if (a != NodeClass::Mixed && a == b) ++agreeing;
  }
  return static_cast<double>(agreeing) / static_cast<double>(graph.edges.size());
}

std::optional<double> majority_match(const MapperGraph& graph, const EmbeddingDataset& ds) {
  if (graph.components.empty()) return std::nullopt;
  int matches = 0;
  for (const auto& component : graph.components) {
    const std::vector<int> points = component_points(component, graph);
    const NodeClass gold = multiset_majority(points, ds, LabelChannel::Gold);
    const NodeClass pred = multiset_majority(points, ds, LabelChannel::Pred);
    if (gold != NodeClass::Mixed && gold == pred) ++matches;
  }
  return static_cast<double>(matches) / static_cast<double>(graph.components.size());
}

double purity_threshold_summary(const MapperGraph& graph, const EmbeddingDataset& ds,
                                LabelChannel channel, double threshold) {
  if (graph.components.empty())
    throw std::runtime_error("purity threshold summary undefined without components");
  int over = 0;
  for (const auto& component : graph.components)
    if (component_purity(component, graph, ds, channel) >= threshold) ++over;
  return 100.0 * static_cast<double>(over) / static_cast<double>(graph.components.size());
}

MetricsReport compute_metrics(const MapperGraph& graph, const EmbeddingDataset& ds,
                              double noise, double threshold) {
  MetricsReport m;
  m.threshold = threshold;
  m.noise = noise;
  m.shape.nodes = static_cast<int>(graph.nodes.size());
  m.shape.edges = static_cast<int>(graph.edges.size());
  m.shape.components = static_cast<int>(graph.components.size());
  for (const auto& component : graph.components)
    if (component.size() == 1) ++m.shape.singletons;

  const bool pred = ds.has_pred();
  for (const auto& component : graph.components) {
    m.cp_gold.push_back(component_purity(component, graph, ds, LabelChannel::Gold));
    if (pred) m.cp_pred.push_back(component_purity(component, graph, ds, LabelChannel::Pred));
  }
  m.ea = edge_agreement(graph, ds);
  if (pred && !graph.components.empty()) m.mm = majority_match(graph, ds);
  if (!graph.components.empty()) {
    m.pct_gold_ge_threshold = purity_threshold_summary(graph, ds, LabelChannel::Gold, threshold);
    if (pred)
      m.pct_pred_ge_threshold = purity_threshold_summary(graph, ds, LabelChannel::Pred, threshold);
  }
  return m;
}

AggregateStat aggregate_values(const std::string& name,
                               const std::vector<std::optional<double>>& values) {
  AggregateStat stat;
  stat.name = name;
  double sum = 0.0;
  for (const auto& v : values)
    if (v) {
      sum += *v;
      ++stat.n;
    }
  if (stat.n == 0) return stat;
  stat.mean = sum / stat.n;
  if (stat.n >= 2) {
    double ss = 0.0;
    for (const auto& v : values)
      if (v) ss += (*v - stat.mean) * (*v - stat.mean);
    stat.stddev = std::sqrt(ss / (stat.n - 1));
  }
  return stat;
}

}  // namespace mapper
