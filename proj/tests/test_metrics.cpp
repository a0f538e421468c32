#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "helpers.hpp"
#include "mapper/metrics.hpp"
#include "reference.hpp"

using namespace mapper;

namespace {

// Hand-assembled graph: nodes as (bin, members); edges/components recomputed
// by build_graph from the member overlaps.
MapperGraph graph_of(std::initializer_list<std::vector<int>> member_lists) {
  std::vector<BinClustering> bcs;
  int bin = 0;
  for (const auto& members : member_lists) {
    BinClustering bc;
    bc.bin = bin++;
    bc.members = members;
    std::sort(bc.members.begin(), bc.members.end());
    bc.labels.assign(bc.members.size(), 0);
    bc.n_clusters = 1;
    bcs.push_back(std::move(bc));
  }
  return build_graph(bcs);
}

EmbeddingDataset dataset_with_labels(const std::vector<int>& gold) {
  Matrix X(static_cast<Index>(gold.size()), 1);
  for (Index i = 0; i < X.rows(); ++i) X(i, 0) = static_cast<double>(i);
  return testutil::make_dataset(X, gold);
}

EmbeddingDataset dataset_with_pred(const std::vector<int>& gold, const std::vector<int>& pred) {
  Matrix X(static_cast<Index>(gold.size()), 1);
  for (Index i = 0; i < X.rows(); ++i) X(i, 0) = static_cast<double>(i);
  return testutil::make_dataset_pred(X, gold, pred);
}

}  // namespace

TEST_CASE("component purity on worked examples") {
  SUBCASE("overlap counts instances per node appearance") {
    // Component of two nodes {a,b} and {b,c}; gold a=1 b=1 c=0.
    // Multiset [1,1,1,0] -> purity 3/4.
    const auto graph = graph_of({{0, 1}, {1, 2}});
    const auto ds = dataset_with_labels({1, 1, 0});
    REQUIRE(graph.components.size() == 1);
    CHECK(component_purity(graph.components[0], graph, ds, LabelChannel::Gold) ==
          doctest::Approx(0.75).epsilon(1e-12));
  }
  SUBCASE("an exact tie floors at 0.5 (label 1 dominant)") {
    const auto graph = graph_of({{0, 1}});
    const auto ds = dataset_with_labels({0, 1});
    CHECK(component_purity(graph.components[0], graph, ds, LabelChannel::Gold) ==
          doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("relabeling 0 <-> 1 leaves purity unchanged") {
    const auto graph = graph_of({{0, 1, 2}, {2, 3, 4}});
    const std::vector<int> gold = {1, 1, 0, 0, 1};
    std::vector<int> flipped(gold.size());
    for (size_t i = 0; i < gold.size(); ++i) flipped[i] = 1 - gold[i];
    const double a =
        component_purity(graph.components[0], graph, dataset_with_labels(gold), LabelChannel::Gold);
    const double b = component_purity(graph.components[0], graph, dataset_with_labels(flipped),
                                      LabelChannel::Gold);
    CHECK(a == doctest::Approx(b).epsilon(1e-12));
  }
}

TEST_CASE("edge agreement") {
  SUBCASE("half the edges agree") {
    // Path A-{0,1} B-{1,2} C-{2,3}; gold 1,1,1,0 gives majorities A=1, B=1,
    // C tie -> Mixed. Edge A-B agrees, B-C involves Mixed -> EA = 1/2.
    const auto graph = graph_of({{0, 1}, {1, 2}, {2, 3}});
    const auto ds = dataset_with_labels({1, 1, 1, 0});
    REQUIRE(graph.edges.size() == 2);
    const auto ea = edge_agreement(graph, ds);
    REQUIRE(ea.has_value());
    CHECK(*ea == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("edgeless graphs have no edge agreement") {
    const auto graph = graph_of({{0}, {1}});
    CHECK_FALSE(edge_agreement(graph, dataset_with_labels({0, 1})).has_value());
  }
  SUBCASE("uniform labels agree everywhere") {
    const auto graph = graph_of({{0, 1}, {1, 2}, {2, 3}});
    const auto ea = edge_agreement(graph, dataset_with_labels({1, 1, 1, 1}));
    REQUIRE(ea.has_value());
    CHECK(*ea == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("majority match") {
  SUBCASE("half the components match") {
    // Component 1: node {0,1} gold maj 1, pred maj 1 -> match.
    // Component 2: node {2,3} gold maj 0, pred maj 1 -> mismatch.
    const auto graph = graph_of({{0, 1}, {2, 3}});
    const auto ds = dataset_with_pred({1, 1, 0, 0}, {1, 1, 1, 1});
    const auto mm = majority_match(graph, ds);
    REQUIRE(mm.has_value());
    CHECK(*mm == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("pred equal to gold matches every component") {
    const auto graph = graph_of({{0, 1}, {2, 3}, {4, 5}});
    const auto mm = majority_match(graph, dataset_with_pred({1, 1, 0, 0, 1, 1}, {1, 1, 0, 0, 1, 1}));
    REQUIRE(mm.has_value());
    CHECK(*mm == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("pred inverted from gold matches nothing") {
    const auto graph = graph_of({{0, 1}, {2, 3}});
    const auto mm = majority_match(graph, dataset_with_pred({1, 1, 0, 0}, {0, 0, 1, 1}));
    REQUIRE(mm.has_value());
    CHECK(*mm == doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("a Mixed majority on either channel is a mismatch") {
    // Gold tie in the only component -> Mixed vs pred 1 -> MM = 0.
    const auto graph = graph_of({{0, 1}});
    const auto mm = majority_match(graph, dataset_with_pred({0, 1}, {1, 1}));
    REQUIRE(mm.has_value());
    CHECK(*mm == doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("absent without pred labels or without components") {
    const auto graph = graph_of({{0, 1}});
    const auto report = compute_metrics(graph, dataset_with_labels({0, 1}), 0.0, 0.9);
    CHECK_FALSE(report.mm.has_value());
    CHECK(report.cp_pred.empty());
    CHECK_FALSE(report.pct_pred_ge_threshold.has_value());
    MapperGraph empty;
    CHECK_FALSE(majority_match(empty, dataset_with_pred({0, 1}, {0, 1})).has_value());
  }
}

TEST_CASE("purity threshold summaries") {
  SUBCASE("fraction of components at or above the cut") {
    // Three singleton components with purities 0.95, 0.85, 1.0 at 0.9:
    // two of three qualify -> 66.67%.
    // Node sizes 20 (19 ones), 20 (17 ones), 5 (5 ones).
    std::vector<int> gold;
    std::vector<int> node_a, node_b, node_c;
    for (int i = 0; i < 20; ++i) {
      node_a.push_back(static_cast<int>(gold.size()));
      gold.push_back(i < 19 ? 1 : 0);
    }
    for (int i = 0; i < 20; ++i) {
      node_b.push_back(static_cast<int>(gold.size()));
      gold.push_back(i < 17 ? 1 : 0);
    }
    for (int i = 0; i < 5; ++i) {
      node_c.push_back(static_cast<int>(gold.size()));
      gold.push_back(1);
    }
    const auto graph = graph_of({node_a, node_b, node_c});
    REQUIRE(graph.components.size() == 3);
    const auto ds = dataset_with_labels(gold);
    CHECK(purity_threshold_summary(graph, ds, LabelChannel::Gold, 0.9) ==
          doctest::Approx(100.0 * 2 / 3).epsilon(1e-9));
    // The threshold is inclusive: 0.95 qualifies at exactly 0.95.
    CHECK(purity_threshold_summary(graph, ds, LabelChannel::Gold, 0.95) ==
          doctest::Approx(100.0 * 2 / 3).epsilon(1e-9));
    CHECK(purity_threshold_summary(graph, ds, LabelChannel::Gold, 1.0) ==
          doctest::Approx(100.0 / 3).epsilon(1e-9));
  }
  SUBCASE("single fully pure component") {
    const auto graph = graph_of({{0, 1, 2}});
    CHECK(purity_threshold_summary(graph, dataset_with_labels({1, 1, 1}), LabelChannel::Gold, 0.9) ==
          doctest::Approx(100.0).epsilon(1e-12));
  }
  SUBCASE("monotone non-increasing in the threshold") {
    std::mt19937_64 rng(7);
    const auto graph = graph_of({{0, 1, 2}, {3, 4}, {5, 6, 7, 8}});
    std::vector<int> gold(9);
    for (auto& g : gold) g = static_cast<int>(rng() % 2);
    const auto ds = dataset_with_labels(gold);
    double prev = 200.0;
    for (double t = 0.5; t <= 1.0 + 1e-9; t += 0.05) {
      const double pct = purity_threshold_summary(graph, ds, LabelChannel::Gold, t);
      CHECK(pct <= prev + 1e-12);
      prev = pct;
    }
  }
}

TEST_CASE("aggregate statistics") {
  SUBCASE("two equal values") {
    const auto st = aggregate_values("cp", {1.0, 1.0});
    CHECK(st.n == 2);
    CHECK(st.mean == doctest::Approx(1.0).epsilon(1e-12));
    REQUIRE(st.stddev.has_value());
    CHECK(*st.stddev == doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("sample standard deviation uses n-1") {
    const auto st = aggregate_values("cp", {0.5, 1.0});
    CHECK(st.mean == doctest::Approx(0.75).epsilon(1e-12));
    REQUIRE(st.stddev.has_value());
    CHECK(*st.stddev == doctest::Approx(std::sqrt(0.125)).epsilon(1e-12));
  }
  SUBCASE("single value has no spread") {
    const auto st = aggregate_values("cp", {0.8});
    CHECK(st.n == 1);
    CHECK(st.mean == doctest::Approx(0.8).epsilon(1e-12));
    CHECK_FALSE(st.stddev.has_value());
  }
  SUBCASE("absent values are excluded, not zeroed") {
    const auto st = aggregate_values("ea", {std::nullopt, 0.5, std::nullopt, 1.0});
    CHECK(st.n == 2);
    CHECK(st.mean == doctest::Approx(0.75).epsilon(1e-12));
  }
  SUBCASE("no values at all") {
    const auto st = aggregate_values("ea", {std::nullopt, std::nullopt});
    CHECK(st.n == 0);
    CHECK_FALSE(st.stddev.has_value());
  }
}

TEST_CASE("full report on a pure two-component graph") {
  const auto graph = graph_of({{0, 1}, {1, 2}, {3, 4}});
  const auto ds = dataset_with_pred({1, 1, 1, 0, 0}, {1, 1, 1, 0, 0});
  const auto report = compute_metrics(graph, ds, 0.0, 0.9);
  REQUIRE(report.cp_gold.size() == 2);
  CHECK(report.cp_gold[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(report.cp_gold[1] == doctest::Approx(1.0).epsilon(1e-12));
  REQUIRE(report.ea.has_value());
  CHECK(*report.ea == doctest::Approx(1.0).epsilon(1e-12));
  REQUIRE(report.mm.has_value());
  CHECK(*report.mm == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(report.pct_gold_ge_threshold == doctest::Approx(100.0).epsilon(1e-12));
  REQUIRE(report.pct_pred_ge_threshold.has_value());
  CHECK(report.shape.nodes == 3);
  CHECK(report.shape.edges == 1);
  CHECK(report.shape.components == 2);
  CHECK(report.shape.singletons == 1);
}

TEST_CASE("metrics agree with a direct enumeration on random graphs") {
  std::mt19937_64 rng(91);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 12 + static_cast<int>(rng() % 20);
    std::vector<int> gold(n), pred(n);
    for (int i = 0; i < n; ++i) {
      gold[i] = static_cast<int>(rng() % 2);
      pred[i] = static_cast<int>(rng() % 2);
    }
    std::vector<std::vector<int>> member_lists;
    const int n_nodes = 2 + static_cast<int>(rng() % 5);
    for (int v = 0; v < n_nodes; ++v) {
      std::set<int> chosen;
      const int m = 1 + static_cast<int>(rng() % 6);
      while (static_cast<int>(chosen.size()) < m) chosen.insert(static_cast<int>(rng() % n));
      member_lists.emplace_back(chosen.begin(), chosen.end());
    }
    std::vector<BinClustering> bcs;
    int bin = 0;
    for (auto& members : member_lists) {
      BinClustering bc;
      bc.bin = bin++;
      bc.members = std::move(members);
      bc.labels.assign(bc.members.size(), 0);
      bc.n_clusters = 1;
      bcs.push_back(std::move(bc));
    }
    const auto graph = build_graph(bcs);
    Matrix X(n, 1);
    for (int i = 0; i < n; ++i) X(i, 0) = i;
    const auto ds = testutil::make_dataset_pred(X, gold, pred);

    ref::Graph rg;
    for (const auto& node : graph.nodes) rg.nodes.push_back({node.bin, node.members});
    for (const auto& e : graph.edges) rg.edges.push_back({e.a, e.b, e.shared});
    rg.components = graph.components;
    const auto expected = ref::metrics(rg, ds);

    const auto report = compute_metrics(graph, ds, 0.0, 0.9);
    REQUIRE(report.cp_gold.size() == expected.cp_gold.size());
    for (size_t i = 0; i < expected.cp_gold.size(); ++i)
      CHECK(report.cp_gold[i] == doctest::Approx(expected.cp_gold[i]).epsilon(1e-12));
    for (size_t i = 0; i < expected.cp_pred.size(); ++i)
      CHECK(report.cp_pred[i] == doctest::Approx(expected.cp_pred[i]).epsilon(1e-12));
    CHECK(report.ea.has_value() == expected.ea.has_value());
    if (report.ea) CHECK(*report.ea == doctest::Approx(*expected.ea).epsilon(1e-12));
    CHECK(report.mm.has_value() == expected.mm.has_value());
    if (report.mm) CHECK(*report.mm == doctest::Approx(*expected.mm).epsilon(1e-12));
  }
}
