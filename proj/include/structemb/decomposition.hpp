#pragma once

#include <cmath>
#include <string>

#include <Eigen/Core>

#include "structemb/error.hpp"
#include "structemb/partition.hpp"

namespace structemb {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar cosine(const Eigen::MatrixBase<DerivedA>& u,
                                 const Eigen::MatrixBase<DerivedB>& v) {
  using Scalar = typename DerivedA::Scalar;
  const Scalar nu = u.norm();
  const Scalar nv = v.norm();
  if (nu == Scalar(0) || nv == Scalar(0)) throw Error(ErrorCode::ZeroNorm, "cosine of a zero vector");
  return u.dot(v) / (nu * nv);
}

// Trainable head over frozen teacher embeddings: structured embedding =
// weights * e. Aspect k reads the partition block range(k).
template <typename Scalar>
struct ProjectionModel {
  MatrixX<Scalar> weights;  // d x d
  VectorX<Scalar> betas;    // K per-aspect output scales
  PartitionMap partition;

  // Starts as the teacher: identity weights, unit betas.
  static ProjectionModel identity(const PartitionMap& p) {
    return {MatrixX<Scalar>::Identity(p.dim(), p.dim()), VectorX<Scalar>::Ones(p.aspect_count()), p};
  }

  int aspect_count() const { return partition.aspect_count(); }
  Eigen::Index dim() const { return partition.dim(); }
};

// Rows are embeddings: `first.row(i)` pairs with `second.row(i)` and
// `targets.row(i)` holds the K metric scores for that pair.
template <typename Scalar>
struct PairBatch {
  MatrixX<Scalar> first;
  MatrixX<Scalar> second;
  MatrixX<Scalar> targets;

  Eigen::Index size() const { return first.rows(); }
};

// Weights of the two objectives. alpha = 0 drops decomposition,
// consistency = 0 drops consistency.
template <typename Scalar>
struct LossWeights {
  Scalar alpha = Scalar(1);
  Scalar consistency = Scalar(1);
};

template <typename Scalar>
struct LossBreakdown {
  Scalar total = Scalar(0);
  Scalar decomposition = Scalar(0);  // mean over the batch, unweighted
  Scalar consistency = Scalar(0);    // unweighted
};

template <typename Scalar>
struct Gradients {
  MatrixX<Scalar> weights;
  VectorX<Scalar> betas;
  LossBreakdown<Scalar> loss;
};

// Per-aspect sub-embedding cosines P_k of the projected pair (not scaled by
// beta).
template <typename Scalar, typename DerivedA, typename DerivedB>
VectorX<Scalar> predict_metrics(const ProjectionModel<Scalar>& model,
                                const Eigen::MatrixBase<DerivedA>& e,
                                const Eigen::MatrixBase<DerivedB>& e2) {
  const VectorX<Scalar> f = model.weights * e;
  const VectorX<Scalar> g = model.weights * e2;
  VectorX<Scalar> p(model.aspect_count());
  for (int k = 0; k < model.aspect_count(); ++k) {
    const auto& r = model.partition.range(k);
    p(k) = cosine(f.segment(r.start, r.size()), g.segment(r.start, r.size()));
  }
  return p;
}

// beta_k * P_k, the value reported as the model's aspect score.
template <typename Scalar, typename DerivedA, typename DerivedB>
VectorX<Scalar> scaled_predictions(const ProjectionModel<Scalar>& model,
                                   const Eigen::MatrixBase<DerivedA>& e,
                                   const Eigen::MatrixBase<DerivedB>& e2) {
  return predict_metrics(model, e, e2).cwiseProduct(model.betas);
}

// Cosine of the residual blocks of the projected pair.
template <typename Scalar, typename DerivedA, typename DerivedB>
Scalar residual_similarity(const ProjectionModel<Scalar>& model,
                           const Eigen::MatrixBase<DerivedA>& e,
                           const Eigen::MatrixBase<DerivedB>& e2) {
  const VectorX<Scalar> f = model.weights * e;
  const VectorX<Scalar> g = model.weights * e2;
  const auto& r = model.partition.residual();
  return cosine(f.segment(r.start, r.size()), g.segment(r.start, r.size()));
}

// Overall cosine of the projected pair.
template <typename Scalar, typename DerivedA, typename DerivedB>
Scalar model_similarity(const ProjectionModel<Scalar>& model, const Eigen::MatrixBase<DerivedA>& e,
                        const Eigen::MatrixBase<DerivedB>& e2) {
  return cosine(model.weights * e, model.weights * e2);
}

// (1/K) sum_k (M_k - beta_k P_k)^2
template <typename Scalar, typename DerivedA, typename DerivedB, typename DerivedM>
Scalar decomposition_loss(const ProjectionModel<Scalar>& model, const Eigen::MatrixBase<DerivedA>& e,
                          const Eigen::MatrixBase<DerivedB>& e2,
                          const Eigen::MatrixBase<DerivedM>& targets) {
  const int k = model.aspect_count();
  if (k == 0) return Scalar(0);
  const VectorX<Scalar> p = predict_metrics(model, e, e2);
  return (targets - model.betas.cwiseProduct(p)).squaredNorm() / Scalar(k);
}

namespace detail {

template <typename Scalar>
MatrixX<Scalar> normalized_rows(const MatrixX<Scalar>& x, VectorX<Scalar>* norms = nullptr) {
  VectorX<Scalar> n = x.rowwise().norm();
  if ((n.array() == Scalar(0)).any()) throw Error(ErrorCode::ZeroNorm, "zero-norm embedding row");
  if (norms != nullptr) *norms = n;
  return n.cwiseInverse().asDiagonal() * x;
}

template <typename Scalar>
MatrixX<Scalar> stack_rows(const MatrixX<Scalar>& a, const MatrixX<Scalar>& b) {
  MatrixX<Scalar> out(a.rows() + b.rows(), a.cols());
  out << a, b;
  return out;
}

}  // namespace detail

// (1/b^2) sum_{i,j} (cos(E_i, E_j) - cos(W E_i, W E_j))^2 over every ordered
// pair of rows, self-pairs included. The untransformed rows are the frozen
// teacher's embeddings.
template <typename Scalar>
Scalar consistency_loss(const ProjectionModel<Scalar>& model, const MatrixX<Scalar>& embeddings) {
  const auto n = embeddings.rows();
  if (n == 0) return Scalar(0);
  const MatrixX<Scalar> v = detail::normalized_rows(embeddings);
  const MatrixX<Scalar> u = detail::normalized_rows(MatrixX<Scalar>(embeddings * model.weights.transpose()));
  const MatrixX<Scalar> diff = v * v.transpose() - u * u.transpose();
  return diff.squaredNorm() / Scalar(n * n);
}

// alpha/b * sum_i decomposition_i + consistency weight * consistency loss
// over the 2b embeddings of the batch.
template <typename Scalar>
LossBreakdown<Scalar> global_loss(const ProjectionModel<Scalar>& model, const PairBatch<Scalar>& batch,
                                  const LossWeights<Scalar>& w = {}) {
  LossBreakdown<Scalar> out;
  const auto b = batch.size();
  if (b == 0) throw Error(ErrorCode::EmptyData, "empty batch");
  for (Eigen::Index i = 0; i < b; ++i) {
    out.decomposition += decomposition_loss(model, batch.first.row(i).transpose(),
                                            batch.second.row(i).transpose(),
                                            batch.targets.row(i).transpose());
  }
  out.decomposition /= Scalar(b);
  out.consistency = consistency_loss(model, detail::stack_rows(batch.first, batch.second));
  out.total = w.alpha * out.decomposition + w.consistency * out.consistency;
  return out;
}

// Analytic gradients of global_loss with respect to the weights and betas.
template <typename Scalar>
Gradients<Scalar> gradients(const ProjectionModel<Scalar>& model, const PairBatch<Scalar>& batch,
                            const LossWeights<Scalar>& w = {}) {
  const auto b = batch.size();
  const auto d = model.dim();
  const int K = model.aspect_count();
  if (b == 0) throw Error(ErrorCode::EmptyData, "empty batch");

  Gradients<Scalar> g;
  g.weights = MatrixX<Scalar>::Zero(d, d);
  g.betas = VectorX<Scalar>::Zero(K);

  // Decomposition: rows of F, G are W e_i and W e2_i.
  const MatrixX<Scalar> f = batch.first * model.weights.transpose();
  const MatrixX<Scalar> s = batch.second * model.weights.transpose();
  MatrixX<Scalar> df = MatrixX<Scalar>::Zero(b, d);
  MatrixX<Scalar> ds = MatrixX<Scalar>::Zero(b, d);
  if (K > 0) {
    const Scalar scale = w.alpha / Scalar(b);
    for (Eigen::Index i = 0; i < b; ++i) {
      Scalar pair_loss = Scalar(0);
      for (int k = 0; k < K; ++k) {
        const auto& r = model.partition.range(k);
        const auto fk = f.row(i).segment(r.start, r.size());
        const auto sk = s.row(i).segment(r.start, r.size());
        const Scalar nf = fk.norm();
        const Scalar ns = sk.norm();
        if (nf == Scalar(0) || ns == Scalar(0)) {
          throw Error(ErrorCode::ZeroNorm, "zero-norm sub-embedding");
        }
        const Scalar p = fk.dot(sk) / (nf * ns);
        const Scalar resid = batch.targets(i, k) - model.betas(k) * p;
        pair_loss += resid * resid;
        const Scalar dp = -Scalar(2) / Scalar(K) * resid * model.betas(k) * scale;
        g.betas(k) += -Scalar(2) / Scalar(K) * resid * p * scale;
        df.row(i).segment(r.start, r.size()) += dp * (sk / (nf * ns) - p * fk / (nf * nf));
        ds.row(i).segment(r.start, r.size()) += dp * (fk / (nf * ns) - p * sk / (ns * ns));
      }
      g.loss.decomposition += pair_loss / Scalar(K);
    }
    g.loss.decomposition /= Scalar(b);
    g.weights += df.transpose() * batch.first + ds.transpose() * batch.second;
  }

  // Consistency over the stacked batch.
  const MatrixX<Scalar> x = detail::stack_rows(batch.first, batch.second);
  const auto n = x.rows();
  VectorX<Scalar> norms;
  const MatrixX<Scalar> v = detail::normalized_rows(x);
  const MatrixX<Scalar> u = detail::normalized_rows(MatrixX<Scalar>(x * model.weights.transpose()), &norms);
  const MatrixX<Scalar> diff = v * v.transpose() - u * u.transpose();
  g.loss.consistency = diff.squaredNorm() / Scalar(n * n);
  if (w.consistency != Scalar(0)) {
    // dL/dC = -2/n^2 (T - C); C symmetric so dL/dU = 2 (dL/dC) U
    const MatrixX<Scalar> du = (-Scalar(4) * w.consistency / Scalar(n * n)) * diff * u;
    const VectorX<Scalar> radial = du.cwiseProduct(u).rowwise().sum();
    const MatrixX<Scalar> dy =
        norms.cwiseInverse().asDiagonal() * (du - radial.asDiagonal() * u);
    g.weights += dy.transpose() * x;
  }

  g.loss.total = w.alpha * g.loss.decomposition + w.consistency * g.loss.consistency;
  return g;
}

}  // namespace structemb
