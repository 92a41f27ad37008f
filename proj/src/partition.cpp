#include "structemb/partition.hpp"

#include <algorithm>
#include <string>

#include "structemb/error.hpp"

namespace structemb {

PartitionMap::PartitionMap(Eigen::Index dim, Eigen::Index sub_dim, std::vector<IndexRange> ranges,
                           IndexRange residual)
    : dim_(dim), sub_dim_(sub_dim), ranges_(std::move(ranges)), residual_(residual) {
  auto fail = [](const std::string& why) { return Error(ErrorCode::PartitionOverflow, why); };
  if (dim_ <= 0 || sub_dim_ < 0) throw fail("dimensions must be positive");

  std::vector<IndexRange> blocks = ranges_;
  for (const auto& r : ranges_) {
    if (r.size() != sub_dim_) throw fail("aspect block width differs from sub-embedding size");
  }
  blocks.push_back(residual_);
  std::sort(blocks.begin(), blocks.end(),
            [](const IndexRange& a, const IndexRange& b) { return a.start < b.start; });
  Eigen::Index cursor = 0;
  for (const auto& b : blocks) {
    if (b.start < 0 || b.end < b.start || b.end > dim_) throw fail("block outside [0, dim)");
    if (b.size() == 0) continue;
    if (b.start != cursor) throw fail("blocks overlap or leave a gap");
    cursor = b.end;
  }
  if (cursor != dim_) throw fail("blocks do not cover [0, dim)");
}

PartitionMap make_partition(Eigen::Index dim, Eigen::Index sub_dim, int aspect_count) {
  if (aspect_count < 0 || sub_dim < 0 || static_cast<Eigen::Index>(aspect_count) * sub_dim > dim) {
    throw Error(ErrorCode::PartitionOverflow,
                std::to_string(aspect_count) + " x " + std::to_string(sub_dim) +
                    " sub-embedding dimensions exceed d = " + std::to_string(dim));
  }
  std::vector<IndexRange> ranges;
  for (int k = 0; k < aspect_count; ++k) ranges.push_back({k * sub_dim, (k + 1) * sub_dim});
  return PartitionMap(dim, sub_dim, std::move(ranges), {aspect_count * sub_dim, dim});
}

}  // namespace structemb
