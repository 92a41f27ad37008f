#pragma once

#include <Eigen/Core>

namespace structemb {

struct TransportPlan {
  double cost = 0.0;
  Eigen::MatrixXd flow;  // rows sum to 1/n, columns to 1/m
};

// Exact optimal transport between the uniform distributions over the rows
// and the columns of `cost` (n x m, entries >= 0). Solved as an integral
// min-cost flow with row supply m and column demand n, which has the same
// optimal plan up to the 1/(n m) scaling.
TransportPlan uniform_transport(const Eigen::MatrixXd& cost);

}  // namespace structemb
