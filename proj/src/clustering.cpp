#include "mapper/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

namespace mapper {

std::string to_string(Metric m) {
  return m == Metric::Cosine ? "cosine" : "euclidean";
}

Metric parse_metric(const std::string& s) {
  if (s == "cosine") return Metric::Cosine;
  if (s == "euclidean") return Metric::Euclidean;
  throw ValidationError("unknown metric '" + s + "' (expected cosine or euclidean)");
}

Matrix pairwise_distance(const Eigen::Ref<const Matrix>& points, Metric metric) {
  const Index m = points.rows();
  Matrix D(m, m);
  if (metric == Metric::Cosine) {
    const Matrix Xn = normalized_rows(points, "point row");
    D.noalias() = Xn * Xn.transpose();
    for (Index i = 0; i < m; ++i)
      for (Index j = i + 1; j < m; ++j) {
        const double v = std::min(2.0, std::max(0.0, 1.0 - D(i, j)));
        D(i, j) = v;
        D(j, i) = v;
      }
  } else {
    const Matrix G = points * points.transpose();
    for (Index i = 0; i < m; ++i)
      for (Index j = i + 1; j < m; ++j) {
        const double d2 = std::max(0.0, G(i, i) + G(j, j) - 2.0 * G(i, j));
        const double v = std::sqrt(d2);
        D(i, j) = v;
        D(j, i) = v;
      }
  }
  D.diagonal().setZero();
  return D;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct MergeNode {
  double weight = 0.0;        // formation distance; top-down split level
  int size = 0;
  int parent = -1;
  std::vector<int> children;  // node ids (leaves are ids < m)
};

struct DisjointSet {
  std::vector<int> parent;
  explicit DisjointSet(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int a) {
    while (parent[a] != a) {
      parent[a] = parent[parent[a]];
      a = parent[a];
    }
    return a;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

std::vector<int> hdbscan_labels(const Eigen::Ref<const Matrix>& points,
                                const ClusteringParams& params) {
  if (params.min_cluster_size < 2)
    throw ValidationError("min_cluster_size must be >= 2, got " +
                          std::to_string(params.min_cluster_size));
  if (params.min_samples < 1)
    throw ValidationError("min_samples must be >= 1, got " +
                          std::to_string(params.min_samples));

  const int m = static_cast<int>(points.rows());
  const int mcs = params.min_cluster_size;
  if (m < std::max(mcs, params.min_samples)) return std::vector<int>(m, kNoise);

  const Matrix D = pairwise_distance(points, params.metric);

  // Core distance: min_samples-th smallest row entry, the point itself (0)
  // included — min_samples = 2 means the nearest other point.
  std::vector<double> core(static_cast<size_t>(m));
  {
    std::vector<double> row(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) row[static_cast<size_t>(j)] = D(i, j);
      std::nth_element(row.begin(), row.begin() + (params.min_samples - 1), row.end());
      core[static_cast<size_t>(i)] = row[static_cast<size_t>(params.min_samples - 1)];
    }
  }
  auto mreach = [&](int i, int j) {
    return std::max({core[static_cast<size_t>(i)], core[static_cast<size_t>(j)], D(i, j)});
  };

  // Prim over the complete mutual-reachability graph; deterministic pick by
  // (weight, vertex index).
  struct Edge {
    double w;
    int a, b;
  };
  std::vector<Edge> mst;
  mst.reserve(static_cast<size_t>(m - 1));
  {
    std::vector<char> in_tree(static_cast<size_t>(m), 0);
    std::vector<double> best_w(static_cast<size_t>(m), kInf);
    std::vector<int> best_from(static_cast<size_t>(m), -1);
    in_tree[0] = 1;
    for (int j = 1; j < m; ++j) {
      best_w[static_cast<size_t>(j)] = mreach(0, j);
      best_from[static_cast<size_t>(j)] = 0;
    }
    for (int step = 1; step < m; ++step) {
      int pick = -1;
      for (int j = 0; j < m; ++j)
        if (!in_tree[static_cast<size_t>(j)] &&
            (pick == -1 || best_w[static_cast<size_t>(j)] < best_w[static_cast<size_t>(pick)]))
          pick = j;
      in_tree[static_cast<size_t>(pick)] = 1;
      const int from = best_from[static_cast<size_t>(pick)];
      mst.push_back({best_w[static_cast<size_t>(pick)], std::min(from, pick),
                     std::max(from, pick)});
      for (int j = 0; j < m; ++j)
        if (!in_tree[static_cast<size_t>(j)]) {
          const double w = mreach(pick, j);
          if (w < best_w[static_cast<size_t>(j)]) {
            best_w[static_cast<size_t>(j)] = w;
            best_from[static_cast<size_t>(j)] = pick;
          }
        }
    }
  }
  std::sort(mst.begin(), mst.end(), [](const Edge& x, const Edge& y) {
    return std::tie(x.w, x.a, x.b) < std::tie(y.w, y.a, y.b);
  });

  // Single-linkage merge hierarchy with equal-weight merges collapsed into one
  // multi-way node, so the tree depends only on the threshold components.
  std::vector<MergeNode> nodes(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i) nodes[static_cast<size_t>(i)].size = 1;
  DisjointSet dsu(m);
  std::vector<int> comp_node(static_cast<size_t>(m));
  std::iota(comp_node.begin(), comp_node.end(), 0);

  size_t e = 0;
  while (e < mst.size()) {
    const double w = mst[e].w;
    std::map<int, std::vector<int>> pending;  // DSU root -> prior node ids
    while (e < mst.size() && mst[e].w == w) {
      const int ra = dsu.find(mst[e].a), rb = dsu.find(mst[e].b);
      auto take = [&](int root) {
        auto it = pending.find(root);
        if (it == pending.end()) return std::vector<int>{comp_node[static_cast<size_t>(root)]};
        auto v = std::move(it->second);
        pending.erase(it);
        return v;
      };
      auto ka = take(ra), kb = take(rb);
      dsu.unite(ra, rb);
      ka.insert(ka.end(), kb.begin(), kb.end());
      pending[dsu.find(ra)] = std::move(ka);
      ++e;
    }
    for (auto& [root, kids] : pending) {
      const int nid = static_cast<int>(nodes.size());
      MergeNode node;
      node.weight = w;
      for (int k : kids) {
        node.size += nodes[static_cast<size_t>(k)].size;
        nodes[static_cast<size_t>(k)].parent = nid;
      }
      node.children = std::move(kids);
      nodes.push_back(std::move(node));
      comp_node[static_cast<size_t>(root)] = nid;
    }
  }
  const int root = static_cast<int>(nodes.size()) - 1;

  // Excess-of-mass selection. Every node of size >= min_cluster_size is a
  // candidate, the root included; stability is size * (1/w_formation -
  // 1/w_parent_formation) with birth lambda 0 at the root. Parent wins ties.
  auto lambda_split = [&](int nid) {
    const double w = nodes[static_cast<size_t>(nid)].weight;
    return w > 0.0 ? 1.0 / w : kInf;
  };
  std::vector<double> best(nodes.size(), 0.0);
  std::vector<char> selected(nodes.size(), 0);
  for (int nid = m; nid < static_cast<int>(nodes.size()); ++nid) {
    const MergeNode& node = nodes[static_cast<size_t>(nid)];
    double kids_sum = 0.0;
    for (int c : node.children) kids_sum += best[static_cast<size_t>(c)];
    if (node.size >= mcs) {
      const double birth = node.parent == -1 ? 0.0 : lambda_split(node.parent);
      const double sigma = node.size * (lambda_split(nid) - birth);
      if (sigma >= kids_sum) {
        selected[static_cast<size_t>(nid)] = 1;
        best[static_cast<size_t>(nid)] = sigma;
      } else {
        best[static_cast<size_t>(nid)] = kids_sum;
      }
    } else {
      best[static_cast<size_t>(nid)] = kids_sum;
    }
  }

  // Outermost selected nodes are the clusters; everything else is noise.
  std::vector<int> labels(static_cast<size_t>(m), kNoise);
  std::vector<std::vector<int>> clusters;
  std::vector<int> stack{root};
  while (!stack.empty()) {
    const int nid = stack.back();
    stack.pop_back();
    if (nid < m) continue;
    if (!selected[static_cast<size_t>(nid)]) {
      for (int c : nodes[static_cast<size_t>(nid)].children) stack.push_back(c);
      continue;
    }
    std::vector<int> members;
    std::vector<int> walk{nid};
    while (!walk.empty()) {
      const int x = walk.back();
      walk.pop_back();
      if (x < m)
        members.push_back(x);
      else
        for (int c : nodes[static_cast<size_t>(x)].children) walk.push_back(c);
    }
    std::sort(members.begin(), members.end());
    clusters.push_back(std::move(members));
  }
  std::sort(clusters.begin(), clusters.end(),
            [](const auto& x, const auto& y) { return x.front() < y.front(); });
  for (size_t c = 0; c < clusters.size(); ++c)
    for (int p : clusters[c]) labels[static_cast<size_t>(p)] = static_cast<int>(c);
  return labels;
}

std::vector<BinClustering> cluster_all_bins(const EmbeddingDataset& ds,
                                            const std::vector<std::vector<int>>& assignments,
                                            const ClusteringParams& params) {
  std::map<int, std::vector<int>> members_by_bin;
  for (size_t p = 0; p < assignments.size(); ++p)
    for (int b : assignments[p]) members_by_bin[b].push_back(static_cast<int>(p));

  std::vector<BinClustering> out;
  out.reserve(members_by_bin.size());
  for (auto& [bin, members] : members_by_bin) {
    BinClustering bc;
    bc.bin = bin;
    bc.members = std::move(members);
    Matrix pts(static_cast<Index>(bc.members.size()), ds.dim());
    for (size_t i = 0; i < bc.members.size(); ++i)
      pts.row(static_cast<Index>(i)) = ds.embeddings().row(bc.members[i]);
    try {
      bc.labels = hdbscan_labels(pts, params);
    } catch (const ValidationError&) {
      throw;
    } catch (const std::exception& ex) {
      throw std::runtime_error("bin " + std::to_string(bin) + ": " + ex.what());
    }
    bc.n_clusters = bc.labels.empty() ? 0 : *std::max_element(bc.labels.begin(), bc.labels.end()) + 1;
    out.push_back(std::move(bc));
  }
  return out;
}

double noise_rate(Index n_instances, const std::vector<BinClustering>& clusterings) {
  if (n_instances == 0) return 0.0;
  std::vector<char> clustered(static_cast<size_t>(n_instances), 0);
  for (const auto& bc : clusterings)
    for (size_t i = 0; i < bc.members.size(); ++i)
      if (bc.labels[i] != kNoise) clustered[static_cast<size_t>(bc.members[i])] = 1;
  const auto n_clustered = std::count(clustered.begin(), clustered.end(), char{1});
  return 1.0 - static_cast<double>(n_clustered) / static_cast<double>(n_instances);
}

}  // namespace mapper
