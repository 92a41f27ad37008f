#pragma once

#include <vector>

#include <Eigen/Core>

namespace structemb {

// Half-open index interval [start, end).
struct IndexRange {
  Eigen::Index start = 0;
  Eigen::Index end = 0;

  Eigen::Index size() const { return end - start; }
  friend bool operator==(const IndexRange&, const IndexRange&) = default;
};

// Assignment of each aspect to a block of embedding dimensions, plus the
// residual block holding whatever the aspects do not cover. Blocks never
// overlap and together cover [0, dim).
class PartitionMap {
 public:
  PartitionMap() = default;

  // Validates non-overlap, coverage and the per-aspect width; throws
  // PartitionOverflow otherwise.
  PartitionMap(Eigen::Index dim, Eigen::Index sub_dim, std::vector<IndexRange> ranges,
               IndexRange residual);

  Eigen::Index dim() const { return dim_; }
  Eigen::Index sub_dim() const { return sub_dim_; }
  int aspect_count() const { return static_cast<int>(ranges_.size()); }
  const IndexRange& range(int aspect) const { return ranges_.at(static_cast<std::size_t>(aspect)); }
  const std::vector<IndexRange>& ranges() const { return ranges_; }
  const IndexRange& residual() const { return residual_; }

  friend bool operator==(const PartitionMap&, const PartitionMap&) = default;

 private:
  Eigen::Index dim_ = 0;
  Eigen::Index sub_dim_ = 0;
  std::vector<IndexRange> ranges_;
  IndexRange residual_;
};

// Contiguous layout: aspect k gets [k h, (k+1) h), the residual [K h, d).
PartitionMap make_partition(Eigen::Index dim, Eigen::Index sub_dim, int aspect_count);

}  // namespace structemb
