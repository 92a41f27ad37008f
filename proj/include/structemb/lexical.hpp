#pragma once

#include <string>
#include <string_view>
#include <unordered_map>

#include <Eigen/Core>

namespace structemb {

// Word vectors keyed by lowercased token. Immutable after load.
class WordVectorTable {
 public:
  WordVectorTable() = default;

  // Throws DimMismatch on inconsistent vectors. First occurrence of a
  // duplicate token wins.
  void add(std::string_view token, const Eigen::VectorXd& v);

  int dim() const { return dim_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  // nullptr for out-of-vocabulary tokens.
  const Eigen::VectorXd* find(std::string_view token) const;

 private:
  int dim_ = 0;
  std::unordered_map<std::string, Eigen::VectorXd> entries_;
};

// Text format: `token v1 v2 ... vd` per line.
WordVectorTable load_vectors(const std::string& path);

// `like-01` -> `like`, lowercased.
std::string normalize_label(std::string_view label);

// Cosine of the label vectors. If the normalized labels are equal the
// result is exactly 1; if either is out of vocabulary it is the exact-match
// indicator. A null table treats every label as out of vocabulary.
double label_similarity(const WordVectorTable* table, std::string_view a, std::string_view b);

}  // namespace structemb
