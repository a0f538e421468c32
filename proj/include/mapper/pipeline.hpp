#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mapper/cover.hpp"
#include "mapper/metrics.hpp"

namespace mapper {

enum class ExportFormat { Json, Dot, CsvNodes };

std::string to_string(ExportFormat f);
ExportFormat parse_export_format(const std::string& s);

struct SweepGrids {
  std::vector<int> r;        // empty -> pinned at RunConfig::resolution
  std::vector<double> eps;   // empty -> pinned at RunConfig::overlap
};

// "a:b:step" inclusive range grids for --sweep-r / --sweep-eps.
std::vector<int> parse_int_grid(const std::string& s);
std::vector<double> parse_double_grid(const std::string& s);

struct RunConfig {
  std::filesystem::path train_path;
  std::filesystem::path test_path;
  std::filesystem::path train_labels_path;
  std::filesystem::path test_labels_path;
  std::vector<LensSpec> lenses;          // empty -> the six 1D defaults
  int resolution = 40;
  double overlap = 0.3;
  ClusteringParams clustering;
  std::uint64_t seed = 0;
  std::optional<Agreement> agreement;    // filter the test split to one tier
  std::filesystem::path out_dir;
  std::vector<ExportFormat> exports = {ExportFormat::Json, ExportFormat::Dot,
                                       ExportFormat::CsvNodes};
  int workers = 1;
  double purity_threshold = 0.9;
  std::optional<SweepGrids> sweep;       // presence selects sweep mode
};

// Reads the JSON config file; missing fields keep RunConfig defaults.
RunConfig config_from_json(const std::filesystem::path& path);
std::string config_to_json(const RunConfig& cfg);

// Throws ValidationError on bad parameters or missing files.
void validate_config(const RunConfig& cfg);

// Everything one lens produces; the unit the CLI, the sweep and the tests share.
struct LensArtifacts {
  LensSpec spec;
  LensValues values;
  CoverSpec cover;
  std::vector<Bin> bins;
  std::vector<std::vector<int>> assignments;
  std::vector<BinClustering> clusterings;
  MapperGraph graph;
  MetricsReport metrics;
};

LensArtifacts run_lens_pipeline(const EmbeddingDataset& test, const LensSpec& spec,
                                const TrainStatistics& stats, int resolution, double overlap,
                                const ClusteringParams& params, double purity_threshold);

// Serialized graph exports. Byte-deterministic for a given graph.
std::string export_graph_json(const MapperGraph& graph, const EmbeddingDataset& ds);
std::string export_graph_dot(const MapperGraph& graph, const EmbeddingDataset& ds);
std::string export_graph_csv_nodes(const MapperGraph& graph, const EmbeddingDataset& ds);

std::string metrics_to_csv(const MetricsReport& m);
std::string components_to_csv(const MapperGraph& graph, const EmbeddingDataset& ds,
                              const MetricsReport& m);
std::string bins_to_csv(const std::vector<BinClustering>& clusterings);

struct RunResult {
  std::vector<LensSpec> lenses;
  std::vector<MetricsReport> reports;        // per lens
  std::vector<AggregateStat> aggregate;
  std::vector<std::filesystem::path> files;  // everything written, out-relative
};

// Full analysis run: per-lens artifact bundle + cross-lens aggregate, plus an
// agreement-tier summary table when the test split carries tiers and no
// single-tier filter is active. Output bytes are identical across repeated
// runs and worker counts; nothing is left behind on failure.
RunResult run_analysis(const RunConfig& cfg);

struct SweepRow {
  std::string lens;
  int r = 0;
  double eps = 0.0;
  double measure = 0.0;  // total expanded bin measure
  std::optional<MetricsReport> metrics;  // absent when the cell failed
  std::string error;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<std::filesystem::path> files;
};

// Grid sweep over (lens, r, epsilon); one CSV row per cell, cell failures
// recorded in-row without aborting the sweep.
SweepResult run_sweep(const RunConfig& cfg);

}  // namespace mapper
