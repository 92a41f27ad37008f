#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "structemb/decomposition.hpp"

namespace structemb {

// Which aspect (if any) owns each embedding dimension. Each dimension has at
// most one owner by construction.
class DimensionAssignment {
 public:
  DimensionAssignment() = default;
  DimensionAssignment(std::vector<int> owner, int aspect_count);

  Eigen::Index dim() const { return static_cast<Eigen::Index>(owner_.size()); }
  int aspect_count() const { return static_cast<int>(dims_.size()); }
  int owner(Eigen::Index dim) const { return owner_.at(static_cast<std::size_t>(dim)); }
  const std::vector<Eigen::Index>& dims_of(int aspect) const { return dims_.at(static_cast<std::size_t>(aspect)); }
  const std::vector<int>& owners() const { return owner_; }

  // Every aspect owns at least one dimension.
  bool covers_all_aspects() const;

  friend bool operator==(const DimensionAssignment&, const DimensionAssignment&) = default;

 private:
  std::vector<int> owner_;  // -1 = unassigned
  std::vector<std::vector<Eigen::Index>> dims_;
};

// Every aspect gets cos(e, e2).
Eigen::VectorXd sb_full_predict(const Eigen::VectorXd& e, const Eigen::VectorXd& e2, int aspect_count);

// K disjoint random h-subsets of [0, d).
DimensionAssignment sb_rand_partition(Eigen::Index d, Eigen::Index h, int aspect_count,
                                      std::uint64_t seed);

// Per-aspect cosine over the dimensions each aspect owns.
Eigen::VectorXd assignment_predict(const DimensionAssignment& assignment, const Eigen::VectorXd& e,
                                   const Eigen::VectorXd& e2);

// omega(i, j) = Spearman over the dev pairs of (e_i * e2_i) against the
// aspect-j metric. Constant columns give 0. Result is d x K.
Eigen::MatrixXd correlation_weights(const PairBatch<double>& dev);

// sum of omega(i, j) over owned (i, j)
double assignment_objective(const Eigen::MatrixXd& omega, const DimensionAssignment& assignment);

// Exact maximizer of sum omega(i,j) x_ij subject to each dimension owning at
// most one aspect and each aspect owning at least one dimension. Equivalent
// to: every dimension takes its best positive aspect, except one distinct
// representative per aspect chosen by a min-cost assignment. Throws
// Infeasible when there are fewer dimensions than aspects.
DimensionAssignment ilp_partition(const Eigen::MatrixXd& omega);

// Rectangular Hungarian method: rows (<= cols) to distinct columns with
// minimum total cost. Returns the column of every row.
std::vector<int> min_cost_assignment(const Eigen::MatrixXd& cost);

// JSON {"<aspect name>": [dims...], ...} in canonical aspect order.
void write_assignment_json(const DimensionAssignment& a, const std::string& path);
DimensionAssignment read_assignment_json(const std::string& path, Eigen::Index dim);

}  // namespace structemb
