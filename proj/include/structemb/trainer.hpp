#pragma once

#include <cstdint>
#include <vector>

#include "structemb/dataset.hpp"
#include "structemb/decomposition.hpp"
#include "structemb/embedding_io.hpp"

namespace structemb {

using Model = ProjectionModel<double>;
using Batch = PairBatch<double>;

struct TrainConfig {
  double lr = 1e-5;
  int warmup = 100;
  int epochs = 8;
  int batch = 64;
  int eval_every = 1000;
  std::uint64_t seed = 0;
  double alpha = 1.0;               // decomposition weight; 0 ablates it
  double consistency_weight = 1.0;  // 0 ablates consistency
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
};

struct EvalPoint {
  long step = 0;
  double dev_loss = 0.0;
  double dev_decomposition = 0.0;
  double dev_consistency = 0.0;

  friend bool operator==(const EvalPoint&, const EvalPoint&) = default;
};

struct TrainHistory {
  std::vector<EvalPoint> evals;
  long steps = 0;
  long best_step = -1;  // -1 when no evaluation ran
};

struct TrainResult {
  Model model;
  TrainHistory history;
};

// Pair records joined with their sentences' teacher embeddings.
Batch make_pair_batch(const std::vector<PairRecord>& records, const EmbeddingTable& embeddings);

// Rows [begin, end) of `data`, reordered by `order`.
Batch gather(const Batch& data, const std::vector<std::size_t>& order, std::size_t begin,
             std::size_t end);

// Adam on the global loss over shuffled mini-batches, linear warm-up to
// `lr`, dev evaluation every `eval_every` steps and after the last step. The
// returned model is the one from the evaluation with the lowest dev loss.
// Throws NonFiniteLoss if the training loss stops being finite.
TrainResult train(const Model& initial, const Batch& train_data, const Batch& dev_data,
                  const TrainConfig& config);

}  // namespace structemb
