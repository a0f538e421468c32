#pragma once

#include <stdlib.h>

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "mapper/dataset.hpp"
#include "mapper/numeric.hpp"

namespace testutil {

namespace fs = std::filesystem;

struct TempDir {
  fs::path path;

  TempDir() {
    std::string tmpl = (fs::temp_directory_path() / "mapper_test_XXXXXX").string();
    path = ::mkdtemp(tmpl.data());
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
};

inline void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
}

inline std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

inline std::vector<std::string> make_ids(const std::string& prefix, int n) {
  std::vector<std::string> ids;
  for (int i = 0; i < n; ++i) ids.push_back(prefix + std::to_string(i));
  return ids;
}

inline void write_binary_embeddings(const fs::path& p, const mapper::Matrix& X,
                                    const std::vector<std::string>& ids) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out.write("MPE1", 4);
  const std::uint32_t n = static_cast<std::uint32_t>(X.rows());
  const std::uint32_t d = static_cast<std::uint32_t>(X.cols());
  out.write(reinterpret_cast<const char*>(&n), 4);
  out.write(reinterpret_cast<const char*>(&d), 4);
  for (mapper::Index i = 0; i < X.rows(); ++i)
    for (mapper::Index j = 0; j < X.cols(); ++j) {
      const float v = static_cast<float>(X(i, j));
      out.write(reinterpret_cast<const char*>(&v), 4);
    }
  for (const auto& id : ids) out << id << '\n';
}

inline void write_csv_embeddings(const fs::path& p, const mapper::Matrix& X,
                                 const std::vector<std::string>& ids) {
  std::ofstream out(p, std::ios::trunc);
  out << "id";
  for (mapper::Index j = 0; j < X.cols(); ++j) out << ",e" << j;
  out << '\n';
  out.precision(17);
  for (mapper::Index i = 0; i < X.rows(); ++i) {
    out << ids[static_cast<size_t>(i)];
    for (mapper::Index j = 0; j < X.cols(); ++j) out << ',' << X(i, j);
    out << '\n';
  }
}

inline void write_label_csv(const fs::path& p, const std::vector<mapper::LabelRecord>& records,
                            bool with_pred, bool with_agreement) {
  std::ofstream out(p, std::ios::trunc);
  out << "id,gold";
  if (with_pred) out << ",pred";
  if (with_agreement) out << ",agreement";
  out << '\n';
  for (const auto& r : records) {
    out << r.id << ',' << r.gold;
    if (with_pred) {
      out << ',';
      if (r.pred) out << *r.pred;
    }
    if (with_agreement) {
      out << ',';
      if (r.agreement) out << mapper::to_string(*r.agreement);
    }
    out << '\n';
  }
}

// Two cosine-separated blobs around orthogonal unit centers; gold = blob id.
inline mapper::Matrix two_blobs(int n_per, int d, double spread, std::uint64_t seed,
                                std::vector<int>* gold = nullptr) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  mapper::Matrix X(2 * n_per, d);
  for (int i = 0; i < 2 * n_per; ++i) {
    const int blob = i < n_per ? 0 : 1;
    for (int j = 0; j < d; ++j) X(i, j) = spread * normal(rng);
    X(i, blob) += 1.0;  // centers e0 and e1
    if (gold) gold->push_back(blob);
  }
  return X;
}

inline std::vector<mapper::LabelRecord> make_records(const std::vector<std::string>& ids,
                                                     const std::vector<int>& gold) {
  std::vector<mapper::LabelRecord> records;
  for (size_t i = 0; i < ids.size(); ++i) records.push_back({ids[i], gold[i], {}, {}});
  return records;
}

inline mapper::EmbeddingDataset make_dataset(const mapper::Matrix& X,
                                             const std::vector<int>& gold) {
  return mapper::EmbeddingDataset(X, make_records(make_ids("x", static_cast<int>(X.rows())), gold));
}

inline mapper::EmbeddingDataset make_dataset_pred(const mapper::Matrix& X,
                                                  const std::vector<int>& gold,
                                                  const std::vector<int>& pred) {
  auto records = make_records(make_ids("x", static_cast<int>(X.rows())), gold);
  for (size_t i = 0; i < records.size(); ++i) records[i].pred = pred[i];
  return mapper::EmbeddingDataset(X, std::move(records));
}

// Lens values as plain rows for the reference implementations.
inline std::vector<std::vector<double>> lens_rows(const mapper::Matrix& values) {
  std::vector<std::vector<double>> rows(static_cast<size_t>(values.rows()));
  for (mapper::Index i = 0; i < values.rows(); ++i)
    for (mapper::Index j = 0; j < values.cols(); ++j)
      rows[static_cast<size_t>(i)].push_back(values(i, j));
  return rows;
}

}  // namespace testutil
