#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mapper/numeric.hpp"

namespace mapper {

enum class Agreement { A0, APlus, APlusPlus };

std::string to_string(Agreement a);
Agreement parse_agreement(const std::string& s);

struct LabelRecord {
  std::string id;
  int gold = 0;                       // binary {0,1}
  std::optional<int> pred;            // optional predicted label
  std::optional<Agreement> agreement; // optional annotator-agreement tier
};

struct EmbeddingMatrix {
  Matrix values;                 // n x d, 64-bit downstream arithmetic
  std::vector<std::string> ids;  // unique, row-aligned
};

enum class EmbeddingFormat { Binary, Csv };

// Binary layout: magic "MPE1", u32 LE n, u32 LE d, n*d float32 LE row-major,
// then n newline-terminated UTF-8 ids.
EmbeddingMatrix load_embeddings(const std::filesystem::path& path, EmbeddingFormat format);

// CSV layout: header "id,e0,...,e{d-1}", one row per instance.
std::vector<LabelRecord> load_labels(const std::filesystem::path& path);

// Embeddings inner-joined with labels by id. Join is strict in both
// directions and the result preserves embedding row order.
class EmbeddingDataset {
 public:
  EmbeddingDataset() = default;
  EmbeddingDataset(Matrix values, std::vector<LabelRecord> labels);

  const Matrix& embeddings() const { return values_; }
  const std::vector<LabelRecord>& labels() const { return labels_; }
  const LabelRecord& label(Index i) const { return labels_[static_cast<size_t>(i)]; }
  Index size() const { return values_.rows(); }
  Index dim() const { return values_.cols(); }

  bool has_pred() const;       // true iff every record carries pred
  bool has_agreement() const;  // true iff at least one record is tagged

 private:
  Matrix values_;
  std::vector<LabelRecord> labels_;
};

EmbeddingDataset join(const EmbeddingMatrix& embeddings, const std::vector<LabelRecord>& labels);

// Rows whose agreement tag equals `tier`. Errors if no record carries a tag;
// an empty result is allowed and flagged with a warning on stderr.
EmbeddingDataset filter_by_agreement(const EmbeddingDataset& ds, Agreement tier);

}  // namespace mapper
