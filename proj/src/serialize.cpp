#include <charconv>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mapper/metrics.hpp"
#include "mapper/pipeline.hpp"

namespace mapper {

namespace {

// Shortest round-trip decimal form; identical bytes for identical doubles.
std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string fmt(std::optional<double> v) { return v ? fmt(*v) : std::string(); }

std::string majority_or_empty(const MapperNode& node, const EmbeddingDataset& ds,
                              LabelChannel channel, bool present) {
  return present ? to_string(node_majority(node, ds, channel)) : std::string();
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace

std::string export_graph_json(const MapperGraph& graph, const EmbeddingDataset& ds) {
  using json = nlohmann::ordered_json;
  const bool pred = ds.has_pred();
  json out;
  out["nodes"] = json::array();
  for (const auto& node : graph.nodes) {
    const NodeClass gold = node_majority(node, ds, LabelChannel::Gold);
    json j;
    j["id"] = node.id;
    j["bin"] = node.bin;
    j["size"] = node.members.size();
    json members = json::array();
    for (int row : node.members) members.push_back(ds.label(row).id);
    j["members"] = std::move(members);
    j["gold_majority"] = to_string(gold);
    if (pred) {
      const NodeClass p = node_majority(node, ds, LabelChannel::Pred);
      j["pred_majority"] = to_string(p);
      j["mixed_flags"] = {{"gold", gold == NodeClass::Mixed}, {"pred", p == NodeClass::Mixed}};
    } else {
      j["pred_majority"] = nullptr;
      j["mixed_flags"] = {{"gold", gold == NodeClass::Mixed}, {"pred", nullptr}};
    }
    out["nodes"].push_back(std::move(j));
  }
  out["edges"] = json::array();
  for (const auto& edge : graph.edges)
    out["edges"].push_back({{"a", edge.a}, {"b", edge.b}, {"shared_count", edge.shared}});
  out["components"] = graph.components;
  return out.dump(2) + "\n";
}

std::string export_graph_dot(const MapperGraph& graph, const EmbeddingDataset& ds) {
  const bool pred = ds.has_pred();
  std::ostringstream out;
  out << "graph mapper {\n";
  for (const auto& node : graph.nodes) {
    out << "  n" << node.id << " [label=\"" << node.id << " (" << node.members.size()
        << ")\" class=\"" << to_string(node_majority(node, ds, LabelChannel::Gold)) << "\"";
    if (pred)
      out << " pred=\"" << to_string(node_majority(node, ds, LabelChannel::Pred)) << "\"";
    out << "];\n";
  }
  for (const auto& edge : graph.edges)
    out << "  n" << edge.a << " -- n" << edge.b << " [label=\"" << edge.shared << "\"];\n";
  out << "}\n";
  return out.str();
}

std::string export_graph_csv_nodes(const MapperGraph& graph, const EmbeddingDataset& ds) {
  const bool pred = ds.has_pred();
  std::ostringstream out;
  out << "node_id,bin,cluster,size,gold_majority,pred_majority\n";
  for (const auto& node : graph.nodes) {
    out << node.id << ',' << node.bin << ',' << node.cluster << ',' << node.members.size() << ','
        << majority_or_empty(node, ds, LabelChannel::Gold, true) << ','
        << majority_or_empty(node, ds, LabelChannel::Pred, pred) << '\n';
  }
  return out.str();
}

std::string metrics_to_csv(const MetricsReport& m) {
  std::ostringstream out;
  out << "metric,value\n";
  out << "nodes," << m.shape.nodes << '\n';
  out << "edges," << m.shape.edges << '\n';
  out << "components," << m.shape.components << '\n';
  out << "singletons," << m.shape.singletons << '\n';
  out << "noise_rate," << fmt(m.noise) << '\n';
  out << "edge_agreement," << fmt(m.ea) << '\n';
  out << "majority_match," << fmt(m.mm) << '\n';
  out << "mean_cp_gold," << (m.cp_gold.empty() ? std::string() : fmt(mean_of(m.cp_gold))) << '\n';
  out << "mean_cp_pred," << (m.cp_pred.empty() ? std::string() : fmt(mean_of(m.cp_pred))) << '\n';
  out << "purity_threshold," << fmt(m.threshold) << '\n';
  out << "pct_cp_gold_ge_threshold,"
      << (m.shape.components > 0 ? fmt(m.pct_gold_ge_threshold) : std::string()) << '\n';
  out << "pct_cp_pred_ge_threshold," << fmt(m.pct_pred_ge_threshold) << '\n';
  return out.str();
}

std::string components_to_csv(const MapperGraph& graph, const EmbeddingDataset& ds,
                              const MetricsReport& m) {
  const bool pred = ds.has_pred();
  std::ostringstream out;
  out << "component_id,n_nodes,n_points,cp_gold,cp_pred\n";
  for (size_t c = 0; c < graph.components.size(); ++c) {
    const auto points = component_points(graph.components[c], graph);
    out << c << ',' << graph.components[c].size() << ',' << points.size() << ','
        << fmt(m.cp_gold[c]) << ',' << (pred ? fmt(m.cp_pred[c]) : std::string()) << '\n';
  }
  return out.str();
}

std::string bins_to_csv(const std::vector<BinClustering>& clusterings) {
  std::ostringstream out;
  out << "bin,size,clusters,noise\n";
  for (const auto& bc : clusterings) {
    int noise = 0;
    for (int label : bc.labels)
      if (label == kNoise) ++noise;
    out << bc.bin << ',' << bc.members.size() << ',' << bc.n_clusters << ',' << noise << '\n';
  }
  return out.str();
}

}  // namespace mapper
