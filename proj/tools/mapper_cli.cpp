#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mapper/pipeline.hpp"

namespace {

using mapper::RunConfig;
using mapper::ValidationError;

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

void print_report(const std::string& lens, const mapper::MetricsReport& m) {
  std::printf("lens %-16s nodes=%d edges=%d components=%d noise=%.4f", lens.c_str(),
              m.shape.nodes, m.shape.edges, m.shape.components, m.noise);
  if (m.ea) std::printf(" edge_agreement=%.4f", *m.ea);
  if (m.mm) std::printf(" majority_match=%.4f", *m.mm);
  if (m.shape.components > 0)
    std::printf(" pct_cp_gold>=%.2f: %.2f%%", m.threshold, m.pct_gold_ge_threshold);
  std::printf("\n");
}

int run(int argc, char** argv) {
  CLI::App app{
      "Builds overlapping-cover cluster graphs over labeled embedding datasets and "
      "reports label-coherence metrics."};

  std::string config_path, train, test, labels, metric, agreement, out_dir;
  std::string sweep_r, sweep_eps;
  std::vector<std::string> lens_tokens, export_tokens;
  int resolution = 0, min_cluster_size = 0, min_samples = 0, workers = 0;
  double overlap = 0.0, purity_threshold = 0.0;
  std::uint64_t seed = 0;

  app.add_option("--config", config_path, "JSON config file; flags override its fields");
  app.add_option("--train", train, "train-split embeddings (.csv or binary)");
  app.add_option("--test", test, "test-split embeddings (.csv or binary)");
  app.add_option("--labels", labels,
                 "label CSV path, or train,test paths when the splits differ");
  app.add_option("--lens", lens_tokens,
                 "lens to run (repeatable); default: centroid_1d pca_1d eccentricity_1d "
                 "l2norm_1d random1_1d random2_1d; 2D: pca_2d eccentricity_2d random_2d "
                 "cosine_c0_c1 external_2d=FILE");
  app.add_option("--resolution", resolution, "intervals per lens dimension (default 40)");
  app.add_option("--overlap", overlap, "cover overlap fraction, 0 <= eps < 1 (default 0.3)");
  app.add_option("--min-cluster-size", min_cluster_size,
                 "smallest cluster size per bin (default 2)");
  app.add_option("--min-samples", min_samples,
                 "core-distance neighbor count (default: min-cluster-size)");
  app.add_option("--metric", metric, "cosine or euclidean (default cosine)");
  app.add_option("--seed", seed, "seed for the random lens directions (default 0)");
  app.add_option("--agreement", agreement, "keep only one annotation tier: A0, A+ or A++");
  app.add_option("--out", out_dir, "output directory for the result bundle");
  app.add_option("--export", export_tokens,
                 "graph formats to write (repeatable): json, dot, csv-nodes (default all)");
  app.add_option("--workers", workers, "worker threads; output is identical at any count");
  app.add_option("--purity-threshold", purity_threshold,
                 "component purity cutoff for summary percentages (default 0.9)");
  app.add_option("--sweep-r", sweep_r, "resolution grid a:b:step; selects sweep mode");
  app.add_option("--sweep-eps", sweep_eps, "overlap grid a:b:step; selects sweep mode");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  RunConfig cfg;
  if (app.count("--config")) cfg = mapper::config_from_json(config_path);
  if (app.count("--train")) cfg.train_path = train;
  if (app.count("--test")) cfg.test_path = test;
  if (app.count("--labels")) {
    const auto parts = split_commas(labels);
    if (parts.size() > 2)
      throw ValidationError("--labels takes one path or train,test paths");
    cfg.train_labels_path = parts[0];
    cfg.test_labels_path = parts.size() == 2 ? parts[1] : parts[0];
  }
  if (app.count("--lens")) {
    cfg.lenses.clear();
    for (const auto& token : lens_tokens)
      for (const auto& part : split_commas(token))
        cfg.lenses.push_back(mapper::LensSpec::parse(part));
  }
  if (app.count("--resolution")) cfg.resolution = resolution;
  if (app.count("--overlap")) cfg.overlap = overlap;
  if (app.count("--min-cluster-size")) {
    cfg.clustering.min_cluster_size = min_cluster_size;
    if (!app.count("--min-samples")) cfg.clustering.min_samples = min_cluster_size;
  }
  if (app.count("--min-samples")) cfg.clustering.min_samples = min_samples;
  if (app.count("--metric")) cfg.clustering.metric = mapper::parse_metric(metric);
  if (app.count("--seed")) cfg.seed = seed;
  if (app.count("--agreement")) cfg.agreement = mapper::parse_agreement(agreement);
  if (app.count("--out")) cfg.out_dir = out_dir;
  if (app.count("--export")) {
    cfg.exports.clear();
    for (const auto& token : export_tokens)
      for (const auto& part : split_commas(token))
        cfg.exports.push_back(mapper::parse_export_format(part));
  }
  if (app.count("--workers")) cfg.workers = workers;
  if (app.count("--purity-threshold")) cfg.purity_threshold = purity_threshold;
  if (app.count("--sweep-r") || app.count("--sweep-eps")) {
    if (!cfg.sweep) cfg.sweep = mapper::SweepGrids{};
    if (app.count("--sweep-r")) cfg.sweep->r = mapper::parse_int_grid(sweep_r);
    if (app.count("--sweep-eps")) cfg.sweep->eps = mapper::parse_double_grid(sweep_eps);
  }

  if (cfg.sweep) {
    const mapper::SweepResult result = mapper::run_sweep(cfg);
    int failed = 0;
    for (const auto& row : result.rows)
      if (!row.error.empty()) ++failed;
    std::printf("sweep: %zu cells", result.rows.size());
    if (failed > 0) std::printf(" (%d failed; see the error column)", failed);
    std::printf("\n");
    for (const auto& rel : result.files)
      std::printf("wrote %s\n", (cfg.out_dir / rel).string().c_str());
    return 0;
  }

  const mapper::RunResult result = mapper::run_analysis(cfg);
  for (size_t i = 0; i < result.lenses.size(); ++i)
    print_report(result.lenses[i].name(), result.reports[i]);
  for (const auto& stat : result.aggregate) {
    if (stat.n == 0) continue;
    std::printf("aggregate %-16s n=%d mean=%.4f", stat.name.c_str(), stat.n, stat.mean);
    if (stat.stddev) std::printf(" std=%.4f", *stat.stddev);
    std::printf("\n");
  }
  std::printf("wrote %zu files to %s\n", result.files.size(), cfg.out_dir.string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ValidationError& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  }
}
