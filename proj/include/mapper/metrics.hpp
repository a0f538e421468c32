#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mapper/graph.hpp"

namespace mapper {

// Component Purity: fraction of the component's member multiset carrying the
// dominant label in `channel`; ties go to label 1. Always in [0.5, 1].
double component_purity(const std::vector<int>& component, const MapperGraph& graph,
                        const EmbeddingDataset& ds, LabelChannel channel);

// Edge Agreement over gold majorities; a Mixed endpoint never agrees.
// Absent (not zero) when the graph has no edges.
std::optional<double> edge_agreement(const MapperGraph& graph, const EmbeddingDataset& ds);

// Majority Match: fraction of components whose gold and pred majorities are
// equal and neither Mixed. Absent when there are no components.
std::optional<double> majority_match(const MapperGraph& graph, const EmbeddingDataset& ds);

// Percent (0..100) of components whose purity meets `threshold` (inclusive).
double purity_threshold_summary(const MapperGraph& graph, const EmbeddingDataset& ds,
                                LabelChannel channel, double threshold);

struct GraphShape {
  int nodes = 0;
  int edges = 0;
  int components = 0;
  int singletons = 0;  // single-node components
};

struct MetricsReport {
  std::vector<double> cp_gold;          // per component, component order
  std::vector<double> cp_pred;          // empty when pred channel absent
  std::optional<double> ea;
  std::optional<double> mm;
  double pct_gold_ge_threshold = 0.0;
  std::optional<double> pct_pred_ge_threshold;
  double threshold = 0.9;
  double noise = 0.0;
  GraphShape shape;
};

MetricsReport compute_metrics(const MapperGraph& graph, const EmbeddingDataset& ds,
                              double noise, double threshold);

struct AggregateStat {
  std::string name;
  int n = 0;                       // values present across lenses
  double mean = 0.0;
  std::optional<double> stddev;    // absent when n < 2
};

// Mean ± sample (n-1) standard deviation across lenses; absent values
// (e.g. EA of an edgeless graph) are excluded from their metric.
AggregateStat aggregate_values(const std::string& name, const std::vector<std::optional<double>>& values);

}  // namespace mapper
