#include "structemb/wl_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "structemb/rng.hpp"
#include "structemb/transport.hpp"

namespace structemb {

std::size_t WlFeatureBag::label_count(std::size_t iteration) const {
  std::size_t n = 0;
  for (const auto& [label, count] : iterations.at(iteration)) n += static_cast<std::size_t>(count);
  return n;
}

WlGraph WlGraph::from_amr(const AmrGraph& g) {
  WlGraph out;
  std::map<std::string, int> index;
  for (const auto& [var, c] : g.concepts()) {
    index.emplace(var, static_cast<int>(out.labels.size()));
    out.labels.push_back(c);
  }
  for (const auto& e : g.edges()) {
    int target;
    if (e.is_relation()) {
      target = index.at(e.target_text());
    } else {
      target = static_cast<int>(out.labels.size());
      out.labels.push_back(e.target_text());
    }
    out.links.push_back({index.at(e.source), target, e.role});
  }
  return out;
}

std::uint64_t wl_hash_label(const std::string& label) { return fnv1a(label); }

namespace {

std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (8 * i)) & 0xFFu;
    h *= 0x100000001B3ULL;
  }
  return h;
}

}  // namespace

WlFeatureBag wl_features(const AmrGraph& g, int iterations) {
  const WlGraph wg = WlGraph::from_amr(g);
  const std::size_t n = wg.labels.size();

  // (direction, role hash, neighbour) per node; direction 0 = outgoing
  std::vector<std::vector<std::tuple<int, std::uint64_t, int>>> incident(n);
  for (const auto& l : wg.links) {
    const auto role = fnv1a(l.role);
    incident[l.source].push_back({0, role, l.target});
    incident[l.target].push_back({1, role, l.source});
  }

  std::vector<std::uint64_t> labels(n);
  for (std::size_t v = 0; v < n; ++v) labels[v] = wl_hash_label(wg.labels[v]);

  WlFeatureBag bag;
  for (int t = 0; t <= iterations; ++t) {
    if (t > 0) {
      std::vector<std::uint64_t> next(n);
      std::vector<std::tuple<int, std::uint64_t, std::uint64_t>> context;
      for (std::size_t v = 0; v < n; ++v) {
        context.clear();
        for (const auto& [dir, role, u] : incident[v]) context.emplace_back(dir, role, labels[u]);
        std::sort(context.begin(), context.end());
        std::uint64_t h = hash_combine(0xCBF29CE484222325ULL, labels[v]);
        for (const auto& [dir, role, lab] : context) {
          h = hash_combine(h, static_cast<std::uint64_t>(dir));
          h = hash_combine(h, role);
          h = hash_combine(h, lab);
        }
        next[v] = h;
      }
      labels = std::move(next);
    }
    auto& counts = bag.iterations.emplace_back();
    for (auto l : labels) counts[l] += 1;
  }
  return bag;
}

double wlk(const WlFeatureBag& a, const WlFeatureBag& b) {
  // Integer arithmetic keeps self-similarity exactly 1.
  long long dot = 0, na = 0, nb = 0;
  const std::size_t iters = std::max(a.iterations.size(), b.iterations.size());
  for (std::size_t t = 0; t < iters; ++t) {
    if (t < a.iterations.size()) {
      for (const auto& [label, c] : a.iterations[t]) {
        na += static_cast<long long>(c) * c;
        if (t < b.iterations.size()) {
          auto it = b.iterations[t].find(label);
          if (it != b.iterations[t].end()) dot += static_cast<long long>(c) * it->second;
        }
      }
    }
    if (t < b.iterations.size()) {
      for (const auto& [label, c] : b.iterations[t]) nb += static_cast<long long>(c) * c;
    }
  }
  if (na == 0 && nb == 0) return 1.0;
  if (na == 0 || nb == 0) return 0.0;
  const double score = static_cast<double>(dot) /
                       std::sqrt(static_cast<double>(na) * static_cast<double>(nb));
  return std::clamp(score, 0.0, 1.0);
}

double wlk(const AmrGraph& a, const AmrGraph& b, int iterations) {
  return wlk(wl_features(a, iterations), wl_features(b, iterations));
}

Eigen::VectorXd node_label_vector(const std::string& label, const WordVectorTable* vectors) {
  const std::string key = normalize_label(label);
  if (vectors != nullptr && !vectors->empty()) {
    if (const auto* v = vectors->find(key)) return *v;
  }
  const int dim = (vectors != nullptr && !vectors->empty()) ? vectors->dim() : kFallbackVectorDim;
  Rng rng(fnv1a(key));
  Eigen::VectorXd v(dim);
  for (int i = 0; i < dim; ++i) v(i) = rng.normal();
  return v / v.norm();
}

Eigen::MatrixXd wwlk_node_embeddings(const AmrGraph& g, int iterations,
                                     const WordVectorTable* vectors) {
  const WlGraph wg = WlGraph::from_amr(g);
  const auto n = static_cast<Eigen::Index>(wg.labels.size());
  std::vector<std::vector<int>> neighbours(static_cast<std::size_t>(n));
  for (const auto& l : wg.links) {
    neighbours[l.source].push_back(l.target);
    neighbours[l.target].push_back(l.source);
  }

  Eigen::MatrixXd x(n, node_label_vector(wg.labels.at(0), vectors).size());
  for (Eigen::Index v = 0; v < n; ++v) x.row(v) = node_label_vector(wg.labels[v], vectors).transpose();

  Eigen::MatrixXd sum = x;
  for (int t = 0; t < iterations; ++t) {
    Eigen::MatrixXd next(x.rows(), x.cols());
    for (Eigen::Index v = 0; v < n; ++v) {
      const auto& nb = neighbours[static_cast<std::size_t>(v)];
      if (nb.empty()) {
        next.row(v) = x.row(v);
        continue;
      }
      Eigen::RowVectorXd mean = Eigen::RowVectorXd::Zero(x.cols());
      for (int u : nb) mean += x.row(u);
      mean /= static_cast<double>(nb.size());
      next.row(v) = 0.5 * (x.row(v) + mean);
    }
    x = std::move(next);
    sum += x;
  }
  return sum / static_cast<double>(iterations + 1);
}

Eigen::MatrixXd euclidean_cost(const Eigen::MatrixXd& rows_a, const Eigen::MatrixXd& rows_b) {
  Eigen::MatrixXd cost(rows_a.rows(), rows_b.rows());
  for (Eigen::Index i = 0; i < rows_a.rows(); ++i) {
    for (Eigen::Index j = 0; j < rows_b.rows(); ++j) {
      cost(i, j) = (rows_a.row(i) - rows_b.row(j)).norm();
    }
  }
  return cost;
}

double wwlk_distance(const AmrGraph& a, const AmrGraph& b, int iterations,
                     const WordVectorTable* vectors) {
  const auto ea = wwlk_node_embeddings(a, iterations, vectors);
  const auto eb = wwlk_node_embeddings(b, iterations, vectors);
  return uniform_transport(euclidean_cost(ea, eb)).cost;
}

double wwlk(const AmrGraph& a, const AmrGraph& b, int iterations, const WordVectorTable* vectors) {
  return 1.0 / (1.0 + wwlk_distance(a, b, iterations, vectors));
}

}  // namespace structemb
