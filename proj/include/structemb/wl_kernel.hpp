#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "structemb/amr_graph.hpp"
#include "structemb/lexical.hpp"

namespace structemb {

// Node-context label multisets for WL iterations 0..T. Labels are 64-bit
// hashes; iteration 0 holds the hashed raw node labels.
struct WlFeatureBag {
  std::vector<std::map<std::uint64_t, int>> iterations;

  std::size_t label_count(std::size_t iteration) const;
};

// View of an AMR graph used by the WL kernels: one node per variable
// (labelled with its concept) and one leaf per attribute edge (labelled with
// the constant).
struct WlGraph {
  std::vector<std::string> labels;
  struct Link {
    int source;
    int target;
    std::string role;
  };
  std::vector<Link> links;

  static WlGraph from_amr(const AmrGraph& g);
};

std::uint64_t wl_hash_label(const std::string& label);

WlFeatureBag wl_features(const AmrGraph& g, int iterations);

// Cosine of the concatenated per-iteration count vectors; 1 when both bags
// are empty.
double wlk(const AmrGraph& a, const AmrGraph& b, int iterations = 2);
double wlk(const WlFeatureBag& a, const WlFeatureBag& b);

inline constexpr int kFallbackVectorDim = 32;

// Word vector for a node label, or a deterministic hash-seeded unit vector of
// the table's dimension (kFallbackVectorDim without a table) when the label is
// out of vocabulary.
Eigen::VectorXd node_label_vector(const std::string& label, const WordVectorTable* vectors);

// Rows are per-node embeddings: the mean over t = 0..T of x_t, where
// x_{t+1}(v) = (x_t(v) + mean of x_t over the neighbours of v) / 2.
Eigen::MatrixXd wwlk_node_embeddings(const AmrGraph& g, int iterations,
                                     const WordVectorTable* vectors);

// Exact 1-Wasserstein distance between the uniform node distributions under
// Euclidean ground cost.
double wwlk_distance(const AmrGraph& a, const AmrGraph& b, int iterations,
                     const WordVectorTable* vectors);

// 1 / (1 + distance)
double wwlk(const AmrGraph& a, const AmrGraph& b, int iterations = 2,
            const WordVectorTable* vectors = nullptr);

Eigen::MatrixXd euclidean_cost(const Eigen::MatrixXd& rows_a, const Eigen::MatrixXd& rows_b);

}  // namespace structemb
