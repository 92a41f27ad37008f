#include "structemb/transport.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <vector>

#include "structemb/error.hpp"

namespace structemb {

namespace {

struct Arc {
  int to;
  long long capacity;
  double cost;
};

class MinCostFlow {
 public:
  explicit MinCostFlow(int nodes) : graph_(nodes) {}

  int add_arc(int from, int to, long long capacity, double cost) {
    graph_[from].push_back(static_cast<int>(arcs_.size()));
    arcs_.push_back({to, capacity, cost});
    graph_[to].push_back(static_cast<int>(arcs_.size()));
    arcs_.push_back({from, 0, -cost});
    return static_cast<int>(arcs_.size()) - 2;
  }

  long long residual(int arc) const { return arcs_[arc].capacity; }

  // Successive shortest paths with SPFA, so negative residual costs are fine.
  void run(int source, int sink) {
    const int n = static_cast<int>(graph_.size());
    std::vector<double> dist(n);
    std::vector<int> via(n);
    std::vector<bool> queued(n);
    while (true) {
      std::fill(dist.begin(), dist.end(), std::numeric_limits<double>::infinity());
      std::fill(via.begin(), via.end(), -1);
      std::deque<int> queue{source};
      dist[source] = 0.0;
      queued.assign(n, false);
      queued[source] = true;
      while (!queue.empty()) {
        int u = queue.front();
        queue.pop_front();
        queued[u] = false;
        for (int id : graph_[u]) {
          const Arc& a = arcs_[id];
          if (a.capacity <= 0) continue;
          const double nd = dist[u] + a.cost;
          // strict improvement with a tolerance so float noise cannot cycle
          if (nd < dist[a.to] - 1e-15 * (1.0 + std::abs(nd))) {
            dist[a.to] = nd;
            via[a.to] = id;
            if (!queued[a.to]) {
              queued[a.to] = true;
              queue.push_back(a.to);
            }
          }
        }
      }
      if (via[sink] < 0) return;
      long long push = std::numeric_limits<long long>::max();
      for (int v = sink; v != source; v = arcs_[via[v] ^ 1].to) {
        push = std::min(push, arcs_[via[v]].capacity);
      }
      for (int v = sink; v != source; v = arcs_[via[v] ^ 1].to) {
        arcs_[via[v]].capacity -= push;
        arcs_[via[v] ^ 1].capacity += push;
      }
    }
  }

 private:
  std::vector<std::vector<int>> graph_;
  std::vector<Arc> arcs_;
};

}  // namespace

TransportPlan uniform_transport(const Eigen::MatrixXd& cost) {
  const auto n = static_cast<int>(cost.rows());
  const auto m = static_cast<int>(cost.cols());
  if (n == 0 || m == 0) throw Error(ErrorCode::EmptyData, "transport between empty distributions");

  const int source = n + m;
  const int sink = n + m + 1;
  MinCostFlow flow(n + m + 2);
  for (int i = 0; i < n; ++i) flow.add_arc(source, i, m, 0.0);
  for (int j = 0; j < m; ++j) flow.add_arc(n + j, sink, n, 0.0);
  std::vector<int> cell(static_cast<std::size_t>(n) * m);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      cell[static_cast<std::size_t>(i) * m + j] = flow.add_arc(i, n + j, std::min(n, m), cost(i, j));
    }
  }
  flow.run(source, sink);

  TransportPlan plan;
  plan.flow = Eigen::MatrixXd::Zero(n, m);
  const double total = static_cast<double>(n) * m;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      const long long units = std::min(n, m) - flow.residual(cell[static_cast<std::size_t>(i) * m + j]);
      if (units == 0) continue;
      plan.flow(i, j) = static_cast<double>(units) / total;
      plan.cost += static_cast<double>(units) * cost(i, j);
    }
  }
  plan.cost /= total;
  return plan;
}

}  // namespace structemb
