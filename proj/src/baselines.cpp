#include "structemb/baselines.hpp"

#include <algorithm>
#include <fstream>
#include <limits>

#include "json.hpp"

#include "structemb/aspects.hpp"
#include "structemb/evaluation.hpp"
#include "structemb/rng.hpp"

namespace structemb {

DimensionAssignment::DimensionAssignment(std::vector<int> owner, int aspect_count)
    : owner_(std::move(owner)), dims_(static_cast<std::size_t>(aspect_count)) {
  for (std::size_t i = 0; i < owner_.size(); ++i) {
    const int o = owner_[i];
    if (o < -1 || o >= aspect_count) throw Error(ErrorCode::BadFormat, "owner out of range");
    if (o >= 0) dims_[static_cast<std::size_t>(o)].push_back(static_cast<Eigen::Index>(i));
  }
}

bool DimensionAssignment::covers_all_aspects() const {
  return std::none_of(dims_.begin(), dims_.end(), [](const auto& d) { return d.empty(); });
}

Eigen::VectorXd sb_full_predict(const Eigen::VectorXd& e, const Eigen::VectorXd& e2, int aspect_count) {
  return Eigen::VectorXd::Constant(aspect_count, cosine(e, e2));
}

DimensionAssignment sb_rand_partition(Eigen::Index d, Eigen::Index h, int aspect_count,
                                      std::uint64_t seed) {
  if (aspect_count < 0 || h <= 0 || static_cast<Eigen::Index>(aspect_count) * h > d) {
    throw Error(ErrorCode::Infeasible, std::to_string(aspect_count) + " x " + std::to_string(h) +
                                           " dimensions do not fit in d = " + std::to_string(d));
  }
  Rng rng(seed);
  const auto order = rng.permutation(static_cast<std::size_t>(d));
  std::vector<int> owner(static_cast<std::size_t>(d), -1);
  for (int k = 0; k < aspect_count; ++k) {
    for (Eigen::Index t = 0; t < h; ++t) owner[order[static_cast<std::size_t>(k * h + t)]] = k;
  }
  return DimensionAssignment(std::move(owner), aspect_count);
}

Eigen::VectorXd assignment_predict(const DimensionAssignment& assignment, const Eigen::VectorXd& e,
                                   const Eigen::VectorXd& e2) {
  Eigen::VectorXd out(assignment.aspect_count());
  for (int k = 0; k < assignment.aspect_count(); ++k) {
    const auto& dims = assignment.dims_of(k);
    Eigen::VectorXd a(static_cast<Eigen::Index>(dims.size())), b(static_cast<Eigen::Index>(dims.size()));
    for (std::size_t t = 0; t < dims.size(); ++t) {
      a(static_cast<Eigen::Index>(t)) = e(dims[t]);
      b(static_cast<Eigen::Index>(t)) = e2(dims[t]);
    }
    out(k) = cosine(a, b);
  }
  return out;
}

Eigen::MatrixXd correlation_weights(const PairBatch<double>& dev) {
  if (dev.size() < 3) throw Error(ErrorCode::Degenerate, "correlation weights need at least 3 dev pairs");
  const Eigen::MatrixXd products = dev.first.cwiseProduct(dev.second);
  Eigen::MatrixXd omega(products.cols(), dev.targets.cols());
  for (Eigen::Index k = 0; k < dev.targets.cols(); ++k) {
    const Eigen::VectorXd m = dev.targets.col(k);
    for (Eigen::Index i = 0; i < products.cols(); ++i) {
      const Eigen::VectorXd v = products.col(i);
      omega(i, k) = try_spearman({v.data(), static_cast<std::size_t>(v.size())},
                                 {m.data(), static_cast<std::size_t>(m.size())})
                        .value_or(0.0);
    }
  }
  return omega;
}

double assignment_objective(const Eigen::MatrixXd& omega, const DimensionAssignment& assignment) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < assignment.dim(); ++i) {
    if (assignment.owner(i) >= 0) total += omega(i, assignment.owner(i));
  }
  return total;
}

std::vector<int> min_cost_assignment(const Eigen::MatrixXd& cost) {
  const int n = static_cast<int>(cost.rows());
  const int m = static_cast<int>(cost.cols());
  if (n > m) throw Error(ErrorCode::Infeasible, "more rows than columns");
  // potentials u (rows), v (cols); p[j] = row matched to column j, 1-based
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<int> p(m + 1, 0), way(m + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(m + 1, inf);
    std::vector<bool> used(m + 1, false);
    do {
      used[j0] = true;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> column(static_cast<std::size_t>(n), -1);
  for (int j = 1; j <= m; ++j) {
    if (p[j] != 0) column[static_cast<std::size_t>(p[j] - 1)] = j - 1;
  }
  return column;
}

DimensionAssignment ilp_partition(const Eigen::MatrixXd& omega) {
  const auto d = omega.rows();
  const auto k = static_cast<int>(omega.cols());
  if (d < k) {
    throw Error(ErrorCode::Infeasible, std::to_string(d) + " dimensions cannot cover " +
                                           std::to_string(k) + " aspects");
  }
  // Free choice of every dimension: best strictly positive aspect.
  std::vector<int> owner(static_cast<std::size_t>(d), -1);
  Eigen::VectorXd free_value = Eigen::VectorXd::Zero(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (int j = 0; j < k; ++j) {
      if (omega(i, j) > free_value(i)) {
        free_value(i) = omega(i, j);
        owner[static_cast<std::size_t>(i)] = j;
      }
    }
  }
  // Forcing dimension i to represent aspect j costs free_value(i) - omega(i, j).
  Eigen::MatrixXd cost(k, d);
  for (int j = 0; j < k; ++j) {
    for (Eigen::Index i = 0; i < d; ++i) cost(j, i) = free_value(i) - omega(i, j);
  }
  const auto representative = min_cost_assignment(cost);
  for (int j = 0; j < k; ++j) owner[static_cast<std::size_t>(representative[static_cast<std::size_t>(j)])] = j;
  return DimensionAssignment(std::move(owner), k);
}

void write_assignment_json(const DimensionAssignment& a, const std::string& path) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (int k = 0; k < a.aspect_count(); ++k) {
    const std::string name = k < kAspectCount ? std::string(aspect_name(all_aspects()[k]))
                                              : "aspect" + std::to_string(k);
    j[name] = a.dims_of(k);
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::Unreadable, "cannot write '" + path + "'");
  out << j.dump(1) << '\n';
}

DimensionAssignment read_assignment_json(const std::string& path, Eigen::Index dim) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Unreadable, "cannot open '" + path + "'");
  nlohmann::ordered_json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::BadFormat, path + ": " + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::BadFormat, path + ": expected an object");
  std::vector<int> owner(static_cast<std::size_t>(dim), -1);
  // Keys name the first K canonical aspects, in any order.
  const int k = static_cast<int>(j.size());
  if (k > kAspectCount) {
    throw Error(ErrorCode::BadFormat, path + ": more than " + std::to_string(kAspectCount) + " aspects");
  }
  for (auto it = j.begin(); it != j.end(); ++it) {
    const auto aspect = parse_aspect(it.key());
    if (!aspect) throw Error(ErrorCode::BadFormat, path + ": unknown aspect '" + it.key() + "'");
    const int index = aspect_index(*aspect);
    if (index >= k) {
      throw Error(ErrorCode::BadFormat, path + ": '" + it.key() + "' given without the aspects before it");
    }
    if (!it.value().is_array()) throw Error(ErrorCode::BadFormat, path + ": '" + it.key() + "' is not a list");
    for (const auto& v : it.value()) {
      if (!v.is_number_integer()) throw Error(ErrorCode::BadFormat, path + ": dimensions must be integers");
      const auto i = v.get<Eigen::Index>();
      if (i < 0 || i >= dim) throw Error(ErrorCode::BadFormat, path + ": dimension out of range");
      if (owner[static_cast<std::size_t>(i)] != -1) {
        throw Error(ErrorCode::BadFormat, path + ": dimension " + std::to_string(i) + " assigned twice");
      }
      owner[static_cast<std::size_t>(i)] = index;
    }
  }
  return DimensionAssignment(std::move(owner), k);
}

}  // namespace structemb
