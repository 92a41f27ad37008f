#include "structemb/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "structemb/rng.hpp"

namespace structemb {

Batch make_pair_batch(const std::vector<PairRecord>& records, const EmbeddingTable& embeddings) {
  const SentenceIndex index(embeddings);
  const auto n = static_cast<Eigen::Index>(records.size());
  Batch out;
  out.first.resize(n, embeddings.dim());
  out.second.resize(n, embeddings.dim());
  out.targets.resize(n, kAspectCount);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& r = records[static_cast<std::size_t>(i)];
    out.first.row(i) = embeddings.values.row(index.row(r.sentence_a)).cast<double>();
    out.second.row(i) = embeddings.values.row(index.row(r.sentence_b)).cast<double>();
    for (int k = 0; k < kAspectCount; ++k) out.targets(i, k) = r.metrics[k];
  }
  return out;
}

Batch gather(const Batch& data, const std::vector<std::size_t>& order, std::size_t begin,
             std::size_t end) {
  const auto n = static_cast<Eigen::Index>(end - begin);
  Batch out;
  out.first.resize(n, data.first.cols());
  out.second.resize(n, data.second.cols());
  out.targets.resize(n, data.targets.cols());
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto src = static_cast<Eigen::Index>(order[begin + static_cast<std::size_t>(i)]);
    out.first.row(i) = data.first.row(src);
    out.second.row(i) = data.second.row(src);
    out.targets.row(i) = data.targets.row(src);
  }
  return out;
}

namespace {

struct AdamState {
  MatrixX<double> m_w, v_w;
  VectorX<double> m_b, v_b;
  long t = 0;
};

EvalPoint evaluate(const Model& model, const Batch& dev, const TrainConfig& config, long step) {
  EvalPoint p;
  p.step = step;
  if (dev.size() == 0) return p;
  // chunked so the b^2 consistency term stays batch-sized
  const auto chunk = static_cast<std::size_t>(std::max(1, config.batch));
  std::vector<std::size_t> order(static_cast<std::size_t>(dev.size()));
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  double weight_sum = 0.0;
  for (std::size_t begin = 0; begin < order.size(); begin += chunk) {
    const std::size_t end = std::min(order.size(), begin + chunk);
    const auto loss = global_loss(model, gather(dev, order, begin, end),
                                  LossWeights<double>{config.alpha, config.consistency_weight});
    const double w = static_cast<double>(end - begin);
    p.dev_loss += w * loss.total;
    p.dev_decomposition += w * loss.decomposition;
    p.dev_consistency += w * loss.consistency;
    weight_sum += w;
  }
  p.dev_loss /= weight_sum;
  p.dev_decomposition /= weight_sum;
  p.dev_consistency /= weight_sum;
  return p;
}

}  // namespace

TrainResult train(const Model& initial, const Batch& train_data, const Batch& dev_data,
                  const TrainConfig& config) {
  TrainResult result{initial, {}};
  if (config.epochs <= 0) return result;
  if (train_data.size() == 0) throw Error(ErrorCode::EmptyData, "no training pairs");
  if (train_data.first.cols() != initial.dim()) {
    throw Error(ErrorCode::DimMismatch, "embedding dim " + std::to_string(train_data.first.cols()) +
                                            " does not match model dim " +
                                            std::to_string(initial.dim()));
  }

  Model model = initial;
  const LossWeights<double> weights{config.alpha, config.consistency_weight};
  AdamState adam{MatrixX<double>::Zero(model.dim(), model.dim()),
                 MatrixX<double>::Zero(model.dim(), model.dim()),
                 VectorX<double>::Zero(model.aspect_count()), VectorX<double>::Zero(model.aspect_count())};

  Rng rng(config.seed);
  const auto n = static_cast<std::size_t>(train_data.size());
  const auto batch = static_cast<std::size_t>(std::max(1, config.batch));
  double best = std::numeric_limits<double>::infinity();
  long step = 0;

  auto checkpoint = [&] {
    auto point = evaluate(model, dev_data, config, step);
    result.history.evals.push_back(point);
    // without dev data the latest model wins
    if (dev_data.size() == 0 || point.dev_loss < best || result.history.best_step < 0) {
      best = point.dev_loss;
      result.history.best_step = step;
      result.model = model;
    }
  };

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const auto order = rng.permutation(n);
    for (std::size_t begin = 0; begin < n; begin += batch) {
      const auto mb = gather(train_data, order, begin, std::min(n, begin + batch));
      const auto g = gradients(model, mb, weights);
      if (!std::isfinite(g.loss.total) || !g.weights.allFinite() || !g.betas.allFinite()) {
        throw Error(ErrorCode::NonFiniteLoss, "training loss is not finite at step " +
                                                  std::to_string(step + 1) + " (epoch " +
                                                  std::to_string(epoch) + ")");
      }

      ++step;
      ++adam.t;
      const double lr = config.warmup > 0
                            ? config.lr * std::min(1.0, static_cast<double>(step) / config.warmup)
                            : config.lr;
      const double c1 = 1.0 - std::pow(config.adam_beta1, static_cast<double>(adam.t));
      const double c2 = 1.0 - std::pow(config.adam_beta2, static_cast<double>(adam.t));

      adam.m_w = config.adam_beta1 * adam.m_w + (1.0 - config.adam_beta1) * g.weights;
      adam.v_w = config.adam_beta2 * adam.v_w + (1.0 - config.adam_beta2) * g.weights.cwiseAbs2();
      model.weights.array() -= lr * (adam.m_w.array() / c1) /
                               ((adam.v_w.array() / c2).sqrt() + config.adam_eps);

      adam.m_b = config.adam_beta1 * adam.m_b + (1.0 - config.adam_beta1) * g.betas;
      adam.v_b = config.adam_beta2 * adam.v_b + (1.0 - config.adam_beta2) * g.betas.cwiseAbs2();
      model.betas.array() -= lr * (adam.m_b.array() / c1) /
                             ((adam.v_b.array() / c2).sqrt() + config.adam_eps);

      if (config.eval_every > 0 && step % config.eval_every == 0) checkpoint();
    }
  }
  if (result.history.evals.empty() || result.history.evals.back().step != step) checkpoint();
  result.history.steps = step;
  return result;
}

}  // namespace structemb
