#include "mapper/pipeline.hpp"

#include <atomic>
#include <charconv>
#include <fstream>
#include <functional>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

namespace mapper {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string fmt(std::optional<double> v) { return v ? fmt(*v) : std::string(); }

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

EmbeddingFormat detect_format(const fs::path& path) {
  return path.extension() == ".csv" ? EmbeddingFormat::Csv : EmbeddingFormat::Binary;
}

EmbeddingDataset load_split(const fs::path& embeddings, const fs::path& labels) {
  return join(load_embeddings(embeddings, detect_format(embeddings)), load_labels(labels));
}

// Fixed-size pool over indexed jobs; results land in index-addressed slots so
// output bytes cannot depend on scheduling.
void run_jobs(int workers, int n, const std::function<void(int)>& fn) {
  if (n <= 0) return;
  const int nthreads = std::min(workers, n);
  if (nthreads <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::mutex mtx;
  std::exception_ptr first_error;
  auto body = [&] {
    while (true) {
      const int i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(mtx);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<size_t>(nthreads));
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(body);
  }
  if (first_error) std::rethrow_exception(first_error);
}

struct FileBuf {
  fs::path rel;
  std::string bytes;
};

// Everything is serialized before anything touches disk; a failure during the
// write phase removes what was already written.
std::vector<fs::path> commit_files(const fs::path& out_dir, const std::vector<FileBuf>& files) {
  std::vector<fs::path> written;
  try {
    fs::create_directories(out_dir);
    for (const auto& f : files) {
      const fs::path target = out_dir / f.rel;
      if (target.has_parent_path()) fs::create_directories(target.parent_path());
      std::ofstream out(target, std::ios::binary | std::ios::trunc);
      if (!out) throw std::runtime_error("cannot write " + target.string());
      out.write(f.bytes.data(), static_cast<std::streamsize>(f.bytes.size()));
      if (!out) throw std::runtime_error("short write to " + target.string());
      written.push_back(target);
    }
  } catch (...) {
    for (const auto& p : written) {
      std::error_code ec;
      fs::remove(p, ec);
    }
    throw;
  }
  std::vector<fs::path> rel;
  rel.reserve(files.size());
  for (const auto& f : files) rel.push_back(f.rel);
  return rel;
}

std::vector<LensKind> kinds_of(const std::vector<LensSpec>& lenses) {
  std::vector<LensKind> kinds;
  for (const auto& spec : lenses)
    if (spec.kind != LensKind::External2d &&
        std::find(kinds.begin(), kinds.end(), spec.kind) == kinds.end())
      kinds.push_back(spec.kind);
  return kinds;
}

std::vector<LensSpec> resolve_lenses(const RunConfig& cfg) {
  if (!cfg.lenses.empty()) return cfg.lenses;
  std::vector<LensSpec> out;
  for (LensKind kind : default_lens_kinds()) out.push_back(LensSpec{kind, {}});
  return out;
}

const std::vector<Agreement>& all_tiers() {
  static const std::vector<Agreement> tiers = {Agreement::A0, Agreement::APlus,
                                               Agreement::APlusPlus};
  return tiers;
}

}  // namespace

std::string to_string(ExportFormat f) {
  switch (f) {
    case ExportFormat::Json: return "json";
    case ExportFormat::Dot: return "dot";
    case ExportFormat::CsvNodes: return "csv-nodes";
  }
  throw std::runtime_error("unreachable export format");
}

ExportFormat parse_export_format(const std::string& s) {
  if (s == "json") return ExportFormat::Json;
  if (s == "dot") return ExportFormat::Dot;
  if (s == "csv-nodes") return ExportFormat::CsvNodes;
  throw ValidationError("unknown export format '" + s + "' (expected json, dot or csv-nodes)");
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

std::vector<int> parse_int_grid(const std::string& s) {
  const auto parts = split(s, ':');
  auto to_int = [&](const std::string& p) {
    int v = 0;
    const auto res = std::from_chars(p.data(), p.data() + p.size(), v);
    if (res.ec != std::errc{} || res.ptr != p.data() + p.size())
      throw ValidationError("malformed grid '" + s + "': bad integer '" + p + "'");
    return v;
  };
  if (parts.size() == 1) return {to_int(parts[0])};
  if (parts.size() != 3) throw ValidationError("grid '" + s + "' must be a single value or a:b:step");
  const int a = to_int(parts[0]), b = to_int(parts[1]), step = to_int(parts[2]);
  if (step <= 0 || b < a) throw ValidationError("grid '" + s + "' must have a <= b and step > 0");
  std::vector<int> out;
  for (int v = a; v <= b; v += step) out.push_back(v);
  return out;
}

std::vector<double> parse_double_grid(const std::string& s) {
  const auto parts = split(s, ':');
  auto to_double = [&](const std::string& p) {
    try {
      size_t pos = 0;
      const double v = std::stod(p, &pos);
      if (pos != p.size()) throw std::invalid_argument(p);
      return v;
    } catch (const std::exception&) {
      throw ValidationError("malformed grid '" + s + "': bad number '" + p + "'");
    }
  };
  if (parts.size() == 1) return {to_double(parts[0])};
  if (parts.size() != 3) throw ValidationError("grid '" + s + "' must be a single value or a:b:step");
  const double a = to_double(parts[0]), b = to_double(parts[1]), step = to_double(parts[2]);
  if (!(step > 0.0) || b < a)
    throw ValidationError("grid '" + s + "' must have a <= b and step > 0");
  const int count = static_cast<int>(std::floor((b - a) / step + 1e-9)) + 1;
  std::vector<double> out;
  // Snap accumulated values (0.1 + 2*0.1 = 0.30000000000000004) to clean doubles.
  for (int i = 0; i < count; ++i) out.push_back(std::round((a + i * step) * 1e12) / 1e12);
  return out;
}

RunConfig config_from_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file: " + path.string());
  json j;
  try {
    in >> j;
  } catch (const std::exception& ex) {
    throw ValidationError("malformed config " + path.string() + ": " + ex.what());
  }
  if (!j.is_object()) throw ValidationError("config root must be an object");

  static const std::set<std::string> known = {
      "train", "test", "labels", "lens", "resolution", "overlap", "min_cluster_size",
      "min_samples", "metric", "seed", "agreement", "out", "export", "workers",
      "purity_threshold", "sweep"};
  for (const auto& [key, _] : j.items())
    if (!known.count(key)) throw ValidationError("unknown config field '" + key + "'");

  RunConfig cfg;
  try {
    if (j.contains("train")) cfg.train_path = j["train"].get<std::string>();
    if (j.contains("test")) cfg.test_path = j["test"].get<std::string>();
    if (j.contains("labels")) {
      const auto& l = j["labels"];
      if (l.is_string()) {
        cfg.train_labels_path = l.get<std::string>();
        cfg.test_labels_path = cfg.train_labels_path;
      } else {
        cfg.train_labels_path = l.at("train").get<std::string>();
        cfg.test_labels_path = l.at("test").get<std::string>();
      }
    }
    if (j.contains("lens"))
      for (const auto& token : j["lens"]) cfg.lenses.push_back(LensSpec::parse(token.get<std::string>()));
    if (j.contains("resolution")) cfg.resolution = j["resolution"].get<int>();
    if (j.contains("overlap")) cfg.overlap = j["overlap"].get<double>();
    if (j.contains("min_cluster_size"))
      cfg.clustering.min_cluster_size = j["min_cluster_size"].get<int>();
    cfg.clustering.min_samples = cfg.clustering.min_cluster_size;
    if (j.contains("min_samples")) cfg.clustering.min_samples = j["min_samples"].get<int>();
    if (j.contains("metric")) cfg.clustering.metric = parse_metric(j["metric"].get<std::string>());
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("agreement") && !j["agreement"].is_null())
      cfg.agreement = parse_agreement(j["agreement"].get<std::string>());
    if (j.contains("out")) cfg.out_dir = j["out"].get<std::string>();
    if (j.contains("export")) {
      cfg.exports.clear();
      for (const auto& token : j["export"])
        cfg.exports.push_back(parse_export_format(token.get<std::string>()));
    }
    if (j.contains("workers")) cfg.workers = j["workers"].get<int>();
    if (j.contains("purity_threshold")) cfg.purity_threshold = j["purity_threshold"].get<double>();
    if (j.contains("sweep")) {
      SweepGrids grids;
      const auto& s = j["sweep"];
      if (s.contains("r"))
        grids.r = s["r"].is_string() ? parse_int_grid(s["r"].get<std::string>())
                                     : s["r"].get<std::vector<int>>();
      if (s.contains("eps"))
        grids.eps = s["eps"].is_string() ? parse_double_grid(s["eps"].get<std::string>())
                                         : s["eps"].get<std::vector<double>>();
      cfg.sweep = std::move(grids);
    }
  } catch (const ValidationError&) {
    throw;
  } catch (const std::exception& ex) {
    throw ValidationError("malformed config " + path.string() + ": " + ex.what());
  }
  return cfg;
}

std::string config_to_json(const RunConfig& cfg) {
  json j;
  j["train"] = cfg.train_path.string();
  j["test"] = cfg.test_path.string();
  j["labels"] = {{"train", cfg.train_labels_path.string()},
                 {"test", cfg.test_labels_path.string()}};
  json lenses = json::array();
  for (const auto& spec : cfg.lenses)
    lenses.push_back(spec.kind == LensKind::External2d
                         ? spec.name() + "=" + spec.external_path.string()
                         : spec.name());
  j["lens"] = std::move(lenses);
  j["resolution"] = cfg.resolution;
  j["overlap"] = cfg.overlap;
  j["min_cluster_size"] = cfg.clustering.min_cluster_size;
  j["min_samples"] = cfg.clustering.min_samples;
  j["metric"] = to_string(cfg.clustering.metric);
  j["seed"] = cfg.seed;
  j["agreement"] = cfg.agreement ? json(to_string(*cfg.agreement)) : json(nullptr);
  // `out` and `workers` are invocation details, not analysis inputs: neither
  // moves a byte of the other outputs, and serializing them would break the
  // bundle-bytes-depend-only-on-(inputs, config, seed) guarantee.
  json exports = json::array();
  for (const auto& f : cfg.exports) exports.push_back(to_string(f));
  j["export"] = std::move(exports);
  j["purity_threshold"] = cfg.purity_threshold;
  if (cfg.sweep) {
    j["sweep"] = {{"r", cfg.sweep->r}, {"eps", cfg.sweep->eps}};
  }
  return j.dump(2) + "\n";
}

void validate_config(const RunConfig& cfg) {
  auto need_file = [](const fs::path& p, const char* what) {
    if (p.empty()) throw ValidationError(std::string(what) + " path is required");
    if (!fs::exists(p)) throw ValidationError(std::string(what) + " file not found: " + p.string());
  };
  need_file(cfg.train_path, "train embeddings");
  need_file(cfg.test_path, "test embeddings");
  need_file(cfg.train_labels_path, "train labels");
  need_file(cfg.test_labels_path, "test labels");
  for (const auto& spec : cfg.lenses)
    if (spec.kind == LensKind::External2d) need_file(spec.external_path, "external coordinates");
  if (cfg.resolution < 1)
    throw ValidationError("resolution must be >= 1, got " + std::to_string(cfg.resolution));
  if (!(cfg.overlap >= 0.0 && cfg.overlap < 1.0))
    throw ValidationError("overlap must satisfy 0 <= epsilon < 1, got " + fmt(cfg.overlap));
  if (cfg.clustering.min_cluster_size < 2)
    throw ValidationError("min_cluster_size must be >= 2, got " +
                          std::to_string(cfg.clustering.min_cluster_size));
  if (cfg.clustering.min_samples < 1)
    throw ValidationError("min_samples must be >= 1, got " +
                          std::to_string(cfg.clustering.min_samples));
  if (cfg.workers < 1)
    throw ValidationError("workers must be >= 1, got " + std::to_string(cfg.workers));
  if (!(cfg.purity_threshold > 0.0 && cfg.purity_threshold <= 1.0))
    throw ValidationError("purity_threshold must be in (0, 1], got " + fmt(cfg.purity_threshold));
  if (cfg.out_dir.empty()) throw ValidationError("output directory is required");
  std::set<std::string> names;
  for (const auto& spec : cfg.lenses)
    if (!names.insert(spec.name()).second)
      throw ValidationError("lens '" + spec.name() + "' requested more than once");
  if (cfg.sweep && cfg.sweep->r.empty() && cfg.sweep->eps.empty())
    throw ValidationError("sweep mode needs at least one non-empty grid");
}

LensArtifacts run_lens_pipeline(const EmbeddingDataset& test, const LensSpec& spec,
                                const TrainStatistics& stats, int resolution, double overlap,
                                const ClusteringParams& params, double purity_threshold) {
  std::string stage = "lens evaluation";
  try {
    LensArtifacts a;
    a.spec = spec;
    a.values = evaluate_lens(test, spec, stats);
    stage = "cover";
    a.cover = CoverSpec{spec.dims(), resolution, overlap};
    a.bins = build_cover(a.cover);
    a.assignments = assign_bins(a.values, a.bins, a.cover);
    stage = "clustering";
    a.clusterings = cluster_all_bins(test, a.assignments, params);
    stage = "graph";
    a.graph = build_graph(a.clusterings);
    stage = "metrics";
    a.metrics = compute_metrics(a.graph, test, noise_rate(test.size(), a.clusterings),
                                purity_threshold);
    return a;
  } catch (const ValidationError& ex) {
    throw ValidationError("lens " + spec.name() + ", " + stage + " stage: " + ex.what());
  } catch (const std::exception& ex) {
    throw std::runtime_error("lens " + spec.name() + ", " + stage + " stage: " + ex.what());
  }
}

namespace {

// The three Table-shaped columns: percent of components at/above the purity
// threshold per channel, and majority match as a percent.
struct TierSummary {
  AggregateStat cp_gold, cp_pred, mm;
};

TierSummary summarize(const std::vector<MetricsReport>& reports) {
  std::vector<std::optional<double>> cp_gold, cp_pred, mm;
  for (const auto& r : reports) {
    const bool any = r.shape.components > 0;
    cp_gold.push_back(any ? std::optional<double>(r.pct_gold_ge_threshold) : std::nullopt);
    cp_pred.push_back(r.pct_pred_ge_threshold);
    mm.push_back(r.mm ? std::optional<double>(*r.mm * 100.0) : std::nullopt);
  }
  return {aggregate_values("cp_gold_pct", cp_gold), aggregate_values("cp_pred_pct", cp_pred),
          aggregate_values("mm_pct", mm)};
}

std::vector<FileBuf> serialize_lens(const LensArtifacts& a, const EmbeddingDataset& test,
                                    const std::vector<ExportFormat>& exports) {
  std::vector<FileBuf> files;
  const fs::path dir = a.spec.name();
  for (const auto& format : exports) {
    switch (format) {
      case ExportFormat::Json:
        files.push_back({dir / "graph.json", export_graph_json(a.graph, test)});
        break;
      case ExportFormat::Dot:
        files.push_back({dir / "graph.dot", export_graph_dot(a.graph, test)});
        break;
      case ExportFormat::CsvNodes:
        files.push_back({dir / "nodes.csv", export_graph_csv_nodes(a.graph, test)});
        break;
    }
  }
  files.push_back({dir / "metrics.csv", metrics_to_csv(a.metrics)});
  files.push_back({dir / "components.csv", components_to_csv(a.graph, test, a.metrics)});
  files.push_back({dir / "bins.csv", bins_to_csv(a.clusterings)});
  return files;
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string aggregate_csv(const std::vector<AggregateStat>& rows) {
  std::ostringstream out;
  out << "metric,n_lenses,mean,std\n";
  for (const auto& s : rows) {
    out << s.name << ',' << s.n << ',';
    if (s.n > 0) out << fmt(s.mean);
    out << ',';
    if (s.stddev) out << fmt(*s.stddev);
    out << '\n';
  }
  return out.str();
}

}  // namespace

RunResult run_analysis(const RunConfig& cfg_in) {
  RunConfig cfg = cfg_in;
  cfg.lenses = resolve_lenses(cfg);
  validate_config(cfg);

  const EmbeddingDataset train = load_split(cfg.train_path, cfg.train_labels_path);
  const EmbeddingDataset test_full = load_split(cfg.test_path, cfg.test_labels_path);
  const EmbeddingDataset test =
      cfg.agreement ? filter_by_agreement(test_full, *cfg.agreement) : test_full;

  const TrainStatistics stats = fit_train_stats(train, cfg.seed, kinds_of(cfg.lenses));

  const int n_lenses = static_cast<int>(cfg.lenses.size());
  std::vector<MetricsReport> reports(static_cast<size_t>(n_lenses));
  std::vector<std::vector<FileBuf>> lens_files(static_cast<size_t>(n_lenses));
  run_jobs(cfg.workers, n_lenses, [&](int i) {
    const LensArtifacts a =
        run_lens_pipeline(test, cfg.lenses[static_cast<size_t>(i)], stats, cfg.resolution,
                          cfg.overlap, cfg.clustering, cfg.purity_threshold);
    reports[static_cast<size_t>(i)] = a.metrics;
    lens_files[static_cast<size_t>(i)] = serialize_lens(a, test, cfg.exports);
  });

  std::vector<AggregateStat> aggregate;
  {
    const TierSummary summary = summarize(reports);
    aggregate.push_back(summary.cp_gold);
    aggregate.push_back(summary.cp_pred);
    aggregate.push_back(summary.mm);
    std::vector<std::optional<double>> ea, noise, nodes, edges, components, singletons;
    for (const auto& r : reports) {
      ea.push_back(r.ea);
      noise.push_back(r.noise);
      nodes.push_back(static_cast<double>(r.shape.nodes));
      edges.push_back(static_cast<double>(r.shape.edges));
      components.push_back(static_cast<double>(r.shape.components));
      singletons.push_back(static_cast<double>(r.shape.singletons));
    }
    aggregate.push_back(aggregate_values("edge_agreement", ea));
    aggregate.push_back(aggregate_values("noise_rate", noise));
    aggregate.push_back(aggregate_values("nodes", nodes));
    aggregate.push_back(aggregate_values("edges", edges));
    aggregate.push_back(aggregate_values("components", components));
    aggregate.push_back(aggregate_values("singletons", singletons));
  }

  std::vector<FileBuf> files;
  for (auto& lf : lens_files)
    for (auto& f : lf) files.push_back(std::move(f));
  files.push_back({"aggregate.csv", aggregate_csv(aggregate)});

  // Per-tier summary table when tiers are present and nothing is filtered.
  // external_2d is skipped here: its coordinate file is aligned to the full
  // test split and cannot be strictly joined against a tier subset.
  if (test_full.has_agreement() && !cfg.agreement) {
    std::vector<LensSpec> tier_lenses;
    for (const auto& spec : cfg.lenses)
      if (spec.kind != LensKind::External2d) tier_lenses.push_back(spec);
    std::ostringstream table;
    table << "tier,n_instances,n_lenses,cp_gold_pct_mean,cp_gold_pct_std,cp_pred_pct_mean,"
             "cp_pred_pct_std,mm_pct_mean,mm_pct_std\n";
    for (Agreement tier : all_tiers()) {
      const EmbeddingDataset subset = filter_by_agreement(test_full, tier);
      std::vector<MetricsReport> tier_reports(tier_lenses.size());
      if (subset.size() > 0)
        run_jobs(cfg.workers, static_cast<int>(tier_lenses.size()), [&](int i) {
          tier_reports[static_cast<size_t>(i)] =
              run_lens_pipeline(subset, tier_lenses[static_cast<size_t>(i)], stats,
                                cfg.resolution, cfg.overlap, cfg.clustering,
                                cfg.purity_threshold)
                  .metrics;
        });
      const TierSummary summary = summarize(tier_reports);
      auto cell = [](const AggregateStat& s) {
        return (s.n > 0 ? fmt(s.mean) : std::string()) + "," +
               (s.stddev ? fmt(*s.stddev) : std::string());
      };
      table << to_string(tier) << ',' << subset.size() << ',' << summary.cp_gold.n << ','
            << cell(summary.cp_gold) << ',' << cell(summary.cp_pred) << ','
            << cell(summary.mm) << '\n';
    }
    files.push_back({"table_agreement.csv", table.str()});
  }

  files.push_back({"run_config.json", config_to_json(cfg)});

  RunResult result;
  result.lenses = cfg.lenses;
  result.reports = std::move(reports);
  result.aggregate = std::move(aggregate);
  result.files = commit_files(cfg.out_dir, files);
  return result;
}

SweepResult run_sweep(const RunConfig& cfg_in) {
  RunConfig cfg = cfg_in;
  cfg.lenses = resolve_lenses(cfg);
  validate_config(cfg);
  if (!cfg.sweep) throw ValidationError("run_sweep called without sweep grids");

  const std::vector<int> r_grid =
      cfg.sweep->r.empty() ? std::vector<int>{cfg.resolution} : cfg.sweep->r;
  const std::vector<double> eps_grid =
      cfg.sweep->eps.empty() ? std::vector<double>{cfg.overlap} : cfg.sweep->eps;

  const EmbeddingDataset train = load_split(cfg.train_path, cfg.train_labels_path);
  const EmbeddingDataset test_full = load_split(cfg.test_path, cfg.test_labels_path);
  const EmbeddingDataset test =
      cfg.agreement ? filter_by_agreement(test_full, *cfg.agreement) : test_full;

  const TrainStatistics stats = fit_train_stats(train, cfg.seed, kinds_of(cfg.lenses));

  struct Cell {
    int lens, r_idx, eps_idx;
  };
  std::vector<Cell> cells;
  for (int l = 0; l < static_cast<int>(cfg.lenses.size()); ++l)
    for (int ri = 0; ri < static_cast<int>(r_grid.size()); ++ri)
      for (int ei = 0; ei < static_cast<int>(eps_grid.size()); ++ei)
        cells.push_back({l, ri, ei});

  std::vector<SweepRow> rows(cells.size());
  run_jobs(cfg.workers, static_cast<int>(cells.size()), [&](int c) {
    const Cell& cell = cells[static_cast<size_t>(c)];
    const LensSpec& spec = cfg.lenses[static_cast<size_t>(cell.lens)];
    SweepRow row;
    row.lens = spec.name();
    row.r = r_grid[static_cast<size_t>(cell.r_idx)];
    row.eps = eps_grid[static_cast<size_t>(cell.eps_idx)];
    try {
      const LensArtifacts a = run_lens_pipeline(test, spec, stats, row.r, row.eps,
                                                cfg.clustering, cfg.purity_threshold);
      row.measure = expanded_measure(a.cover);
      row.metrics = a.metrics;
    } catch (const std::exception& ex) {
      row.error = ex.what();
    }
    rows[static_cast<size_t>(c)] = std::move(row);
  });

  std::ostringstream csv;
  csv << "lens,r,eps,expanded_measure,nodes,edges,components,singletons,noise_rate,"
         "edge_agreement,majority_match,mean_cp_gold,mean_cp_pred,"
         "pct_cp_gold_ge_threshold,pct_cp_pred_ge_threshold,error\n";
  for (const auto& row : rows) {
    csv << row.lens << ',' << row.r << ',' << fmt(row.eps) << ',';
    if (row.metrics) {
      const MetricsReport& m = *row.metrics;
      csv << fmt(row.measure) << ',' << m.shape.nodes << ',' << m.shape.edges << ','
          << m.shape.components << ',' << m.shape.singletons << ',' << fmt(m.noise) << ','
          << fmt(m.ea) << ',' << fmt(m.mm) << ','
          << (m.cp_gold.empty() ? std::string() : fmt(mean_of(m.cp_gold))) << ','
          << (m.cp_pred.empty() ? std::string() : fmt(mean_of(m.cp_pred))) << ','
          << (m.shape.components > 0 ? fmt(m.pct_gold_ge_threshold) : std::string()) << ','
          << fmt(m.pct_pred_ge_threshold) << ',';
    } else {
      csv << ",,,,,,,,,,,";
    }
    csv << csv_quote(row.error) << '\n';
  }

  std::vector<FileBuf> files;
  files.push_back({"sweep.csv", csv.str()});
  files.push_back({"sweep_config.json", config_to_json(cfg)});

  SweepResult result;
  result.rows = std::move(rows);
  result.files = commit_files(cfg.out_dir, files);
  return result;
}

}  // namespace mapper
