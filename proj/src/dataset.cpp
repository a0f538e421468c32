#include "mapper/dataset.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace mapper {

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string cur;
  for (char c : text) {
    if (c == '\n') {
      lines.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) lines.push_back(cur);
  return lines;
}

double parse_double(const std::string& s, const std::string& context) {
  try {
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ValidationError("malformed numeric value '" + s + "' at " + context);
  }
}

std::uint32_t read_u32_le(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
         static_cast<std::uint32_t>(p[2]) << 16 | static_cast<std::uint32_t>(p[3]) << 24;
}

float read_f32_le(const unsigned char* p) {
  std::uint32_t bits = read_u32_le(p);
  float f;
  std::memcpy(&f, &bits, sizeof f);
  return f;
}

EmbeddingMatrix load_binary(const std::filesystem::path& path) {
  const std::string raw = read_file(path);
  const auto* p = reinterpret_cast<const unsigned char*>(raw.data());
  if (raw.size() < 12 || std::memcmp(p, "MPE1", 4) != 0)
    throw ValidationError("malformed header in " + path.string() + ": expected magic MPE1");
  const std::uint64_t n = read_u32_le(p + 4);
  const std::uint64_t d = read_u32_le(p + 8);
  if (n == 0 || d == 0)
    throw ValidationError("empty matrix in " + path.string() + " (n=" + std::to_string(n) +
                          ", d=" + std::to_string(d) + ")");
  const std::uint64_t payload = n * d * 4;
  if (raw.size() < 12 + payload)
    throw ValidationError("truncated embedding payload in " + path.string());

  EmbeddingMatrix out;
  out.values.resize(static_cast<Index>(n), static_cast<Index>(d));
  for (std::uint64_t i = 0; i < n; ++i)
    for (std::uint64_t j = 0; j < d; ++j) {
      const float v = read_f32_le(p + 12 + (i * d + j) * 4);
      if (!std::isfinite(v))
        throw ValidationError("non-finite embedding value at row " + std::to_string(i) +
                              ", column " + std::to_string(j) + " in " + path.string());
      out.values(static_cast<Index>(i), static_cast<Index>(j)) = static_cast<double>(v);
    }

  size_t pos = 12 + payload;
  out.ids.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    const size_t nl = raw.find('\n', pos);
    if (nl == std::string::npos)
      throw ValidationError("missing id line " + std::to_string(i) + " in " + path.string());
    out.ids.push_back(raw.substr(pos, nl - pos));
    pos = nl + 1;
  }
  if (pos != raw.size())
    throw ValidationError("trailing bytes after id block in " + path.string());
  return out;
}

EmbeddingMatrix load_csv(const std::filesystem::path& path) {
  const auto lines = split_lines(read_file(path));
  if (lines.empty()) throw ValidationError("empty matrix in " + path.string());
  const auto header = split_csv_line(lines[0]);
  if (header.size() < 2 || header[0] != "id")
    throw ValidationError("malformed header in " + path.string() + ": expected id,e0,...");
  const size_t d = header.size() - 1;
  for (size_t j = 0; j < d; ++j)
    if (header[j + 1] != "e" + std::to_string(j))
      throw ValidationError("malformed header in " + path.string() + ": column " +
                            std::to_string(j + 1) + " should be e" + std::to_string(j));
  const size_t n = lines.size() - 1;
  if (n == 0) throw ValidationError("empty matrix in " + path.string());

  EmbeddingMatrix out;
  out.values.resize(static_cast<Index>(n), static_cast<Index>(d));
  out.ids.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    const auto cells = split_csv_line(lines[i + 1]);
    if (cells.size() != d + 1)
      throw ValidationError("dimension mismatch at row " + std::to_string(i) + " in " +
                            path.string() + ": expected " + std::to_string(d + 1) +
                            " cells, got " + std::to_string(cells.size()));
    out.ids.push_back(cells[0]);
    for (size_t j = 0; j < d; ++j) {
      const double v =
          parse_double(cells[j + 1], "row " + std::to_string(i) + " of " + path.string());
      if (!std::isfinite(v))
        throw ValidationError("non-finite embedding value at row " + std::to_string(i) +
                              ", column " + std::to_string(j) + " in " + path.string());
      out.values(static_cast<Index>(i), static_cast<Index>(j)) = v;
    }
  }
  return out;
}

void check_unique_ids(const std::vector<std::string>& ids, const std::filesystem::path& path) {
  std::unordered_set<std::string> seen;
  for (const auto& id : ids)
    if (!seen.insert(id).second)
      throw ValidationError("duplicate id '" + id + "' in " + path.string());
}

}  // namespace

std::string to_string(Agreement a) {
  switch (a) {
    case Agreement::A0: return "A0";
    case Agreement::APlus: return "A+";
    case Agreement::APlusPlus: return "A++";
  }
  throw std::runtime_error("unreachable agreement value");
}

Agreement parse_agreement(const std::string& s) {
  if (s == "A0") return Agreement::A0;
  if (s == "A+") return Agreement::APlus;
  if (s == "A++") return Agreement::APlusPlus;
  throw ValidationError("unknown agreement tier '" + s + "' (expected A0, A+ or A++)");
}

EmbeddingMatrix load_embeddings(const std::filesystem::path& path, EmbeddingFormat format) {
  EmbeddingMatrix out =
      format == EmbeddingFormat::Binary ? load_binary(path) : load_csv(path);
  check_unique_ids(out.ids, path);
  return out;
}

std::vector<LabelRecord> load_labels(const std::filesystem::path& path) {
  const auto lines = split_lines(read_file(path));
  if (lines.empty()) throw ValidationError("empty label file " + path.string());
  const auto header = split_csv_line(lines[0]);

  int col_id = -1, col_gold = -1, col_pred = -1, col_agreement = -1;
  for (size_t j = 0; j < header.size(); ++j) {
    const std::string& h = header[j];
    int* slot = nullptr;
    if (h == "id") slot = &col_id;
    else if (h == "gold") slot = &col_gold;
    else if (h == "pred") slot = &col_pred;
    else if (h == "agreement") slot = &col_agreement;
    else
      throw ValidationError("unknown column '" + h + "' in " + path.string());
    if (*slot != -1) throw ValidationError("duplicate column '" + h + "' in " + path.string());
    *slot = static_cast<int>(j);
  }
  if (col_id < 0 || col_gold < 0)
    throw ValidationError("label file " + path.string() + " must have id and gold columns");

  auto parse_binary = [&](const std::string& s, size_t row, const char* what) {
    if (s == "0") return 0;
    if (s == "1") return 1;
    throw ValidationError(std::string(what) + " value '" + s + "' at row " +
                          std::to_string(row) + " of " + path.string() +
                          " is outside {0,1}");
  };

  std::vector<LabelRecord> out;
  std::unordered_set<std::string> seen;
  for (size_t i = 1; i < lines.size(); ++i) {
    const auto cells = split_csv_line(lines[i]);
    if (cells.size() != header.size())
      throw ValidationError("wrong cell count at row " + std::to_string(i - 1) + " of " +
                            path.string());
    LabelRecord rec;
    rec.id = cells[static_cast<size_t>(col_id)];
    if (!seen.insert(rec.id).second)
      throw ValidationError("duplicate id '" + rec.id + "' in " + path.string());
    rec.gold = parse_binary(cells[static_cast<size_t>(col_gold)], i - 1, "gold");
    if (col_pred >= 0) {
      const std::string& s = cells[static_cast<size_t>(col_pred)];
      if (!s.empty()) rec.pred = parse_binary(s, i - 1, "pred");
    }
    if (col_agreement >= 0) {
      const std::string& s = cells[static_cast<size_t>(col_agreement)];
      if (!s.empty()) rec.agreement = parse_agreement(s);
    }
    out.push_back(std::move(rec));
  }
  if (out.empty()) throw ValidationError("label file " + path.string() + " has no rows");
  return out;
}

EmbeddingDataset::EmbeddingDataset(Matrix values, std::vector<LabelRecord> labels)
    : values_(std::move(values)), labels_(std::move(labels)) {
  if (values_.rows() != static_cast<Index>(labels_.size()))
    throw std::runtime_error("embedding/label row count mismatch");
}

bool EmbeddingDataset::has_pred() const {
  if (labels_.empty()) return false;
  return std::all_of(labels_.begin(), labels_.end(),
                     [](const LabelRecord& r) { return r.pred.has_value(); });
}

bool EmbeddingDataset::has_agreement() const {
  return std::any_of(labels_.begin(), labels_.end(),
                     [](const LabelRecord& r) { return r.agreement.has_value(); });
}

EmbeddingDataset join(const EmbeddingMatrix& embeddings, const std::vector<LabelRecord>& labels) {
  std::unordered_map<std::string, size_t> by_id;
  by_id.reserve(labels.size());
  for (size_t i = 0; i < labels.size(); ++i) by_id.emplace(labels[i].id, i);
  if (by_id.size() != labels.size())
    throw ValidationError("duplicate ids among label records");

  std::vector<LabelRecord> joined;
  joined.reserve(embeddings.ids.size());
  std::vector<bool> used(labels.size(), false);
  for (const auto& id : embeddings.ids) {
    auto it = by_id.find(id);
    if (it == by_id.end())
      throw ValidationError("unmatched id '" + id + "': embedding row has no label");
    used[it->second] = true;
    joined.push_back(labels[it->second]);
  }
  for (size_t i = 0; i < labels.size(); ++i)
    if (!used[i])
      throw ValidationError("unmatched id '" + labels[i].id + "': label has no embedding row");

  return EmbeddingDataset(embeddings.values, std::move(joined));
}

EmbeddingDataset filter_by_agreement(const EmbeddingDataset& ds, Agreement tier) {
  if (!ds.has_agreement())
    throw ValidationError("agreement tier requested but no agreement column loaded");
  std::vector<Index> keep;
  for (Index i = 0; i < ds.size(); ++i)
    if (ds.label(i).agreement && *ds.label(i).agreement == tier) keep.push_back(i);

  Matrix values(static_cast<Index>(keep.size()), ds.dim());
  std::vector<LabelRecord> labels;
  labels.reserve(keep.size());
  for (size_t i = 0; i < keep.size(); ++i) {
    values.row(static_cast<Index>(i)) = ds.embeddings().row(keep[i]);
    labels.push_back(ds.label(keep[i]));
  }
  if (keep.empty())
    std::cerr << "warning: agreement filter " << to_string(tier)
              << " matched no instances\n";
  return EmbeddingDataset(std::move(values), std::move(labels));
}

}  // namespace mapper
