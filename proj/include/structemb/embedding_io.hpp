#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

namespace structemb {

// Frozen teacher embeddings. File layout (all little-endian):
//   "EMB1" | u32 count | u32 dim | count*dim f32, row-major
// plus a sidecar text file `<path>.txt` holding one sentence per row.
struct EmbeddingTable {
  Eigen::MatrixXf values;           // count x dim
  std::vector<std::string> sentences;

  Eigen::Index count() const { return values.rows(); }
  Eigen::Index dim() const { return values.cols(); }
};

std::string sidecar_path(const std::string& path);

void write_embeddings(const EmbeddingTable& table, const std::string& path);

// The sidecar is optional on read; when present its line count must equal
// the row count.
EmbeddingTable read_embeddings(const std::string& path);

// Sentence text -> row, first occurrence wins.
class SentenceIndex {
 public:
  explicit SentenceIndex(const EmbeddingTable& table);

  // Throws EmptyData when the sentence has no embedding.
  Eigen::Index row(const std::string& sentence) const;
  bool contains(const std::string& sentence) const { return rows_.count(sentence) != 0; }

 private:
  std::unordered_map<std::string, Eigen::Index> rows_;
};

}  // namespace structemb
