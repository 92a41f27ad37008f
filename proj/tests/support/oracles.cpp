#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <set>

#include <Eigen/LU>

namespace oracle {

using structemb::TripleKind;
using structemb::TripleSet;

namespace {

int count_matches(const TripleSet& a, const TripleSet& b, const std::map<std::string, std::string>& f) {
  int matched = 0;
  for (const auto& t : a) {
    auto s = f.find(t.source);
    if (s == f.end()) continue;
    structemb::Triple image = t;
    image.source = s->second;
    if (t.kind == TripleKind::Relation) {
      auto g = f.find(t.target);
      if (g == f.end()) continue;
      image.target = g->second;
    }
    if (b.count(image)) ++matched;
  }
  return matched;
}

std::vector<std::string> variables(const TripleSet& t) {
  std::vector<std::string> out;
  for (const auto& x : t) {
    if (x.kind == TripleKind::Instance) out.push_back(x.source);
  }
  return out;
}

}  // namespace

SmatchOracle exhaustive_smatch(const TripleSet& a, const TripleSet& b) {
  const auto va = variables(a);
  const auto vb = variables(b);
  std::map<std::string, std::string> f;
  std::set<std::string> used;
  int best = 0;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == va.size()) {
      best = std::max(best, count_matches(a, b, f));
      return;
    }
    rec(i + 1);  // leave va[i] unmapped
    for (const auto& target : vb) {
      if (used.count(target)) continue;
      used.insert(target);
      f[va[i]] = target;
      rec(i + 1);
      f.erase(va[i]);
      used.erase(target);
    }
  };
  rec(0);
  SmatchOracle out;
  out.matched = best;
  const double total = static_cast<double>(a.size() + b.size());
  out.score = total == 0 ? 0.0 : 2.0 * best / total;
  return out;
}

double transport_by_vertices(const Eigen::MatrixXd& cost) {
  const int m = static_cast<int>(cost.rows());
  const int n = static_cast<int>(cost.cols());
  const int cells = m * n;
  const int basis = m + n - 1;
  Eigen::VectorXd rhs(m + n);
  for (int i = 0; i < m; ++i) rhs(i) = 1.0 / m;
  for (int j = 0; j < n; ++j) rhs(m + j) = 1.0 / n;

  double best = std::numeric_limits<double>::infinity();
  std::vector<int> pick;
  std::function<void(int)> rec = [&](int start) {
    if (static_cast<int>(pick.size()) == basis) {
      Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m + n, basis);
      for (int c = 0; c < basis; ++c) {
        a(pick[c] / n, c) = 1.0;
        a(m + pick[c] % n, c) = 1.0;
      }
      Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
      if (lu.rank() != basis) return;
      const Eigen::VectorXd x = lu.solve(rhs);
      if ((a * x - rhs).cwiseAbs().maxCoeff() > 1e-12) return;
      if (x.minCoeff() < -1e-12) return;
      double c = 0.0;
      for (int k = 0; k < basis; ++k) c += cost(pick[k] / n, pick[k] % n) * x(k);
      best = std::min(best, c);
      return;
    }
    for (int cell = start; cell < cells; ++cell) {
      pick.push_back(cell);
      rec(cell + 1);
      pick.pop_back();
    }
  };
  rec(0);
  return best;
}

double brute_force_assignment(const Eigen::MatrixXd& omega) {
  const int d = static_cast<int>(omega.rows());
  const int k = static_cast<int>(omega.cols());
  std::vector<int> label(static_cast<std::size_t>(d), -1);
  double best = -std::numeric_limits<double>::infinity();
  std::function<void(int)> rec = [&](int i) {
    if (i == d) {
      std::vector<bool> covered(static_cast<std::size_t>(k), false);
      double value = 0.0;
      for (int r = 0; r < d; ++r) {
        if (label[r] < 0) continue;
        covered[label[r]] = true;
        value += omega(r, label[r]);
      }
      if (std::all_of(covered.begin(), covered.end(), [](bool c) { return c; })) best = std::max(best, value);
      return;
    }
    for (int j = -1; j < k; ++j) {
      label[i] = j;
      rec(i + 1);
    }
  };
  rec(0);
  return best;
}

std::vector<double> naive_average_ranks(const std::vector<double>& x) {
  std::vector<double> r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    double less = 0, equal = 0;
    for (double v : x) {
      if (v < x[i]) less += 1;
      if (v == x[i]) equal += 1;
    }
    r[i] = 1.0 + less + (equal - 1.0) / 2.0;
  }
  return r;
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

double naive_spearman(const std::vector<double>& x, const std::vector<double>& y) {
  return pearson(naive_average_ranks(x), naive_average_ranks(y));
}

void f1_pair(const std::vector<double>& scores, const std::vector<int>& labels, double threshold,
             double& sim, double& not_sim) {
  // confusion counts for class 1; class 0 is the mirror image
  double tp = 0, fp = 0, fn = 0, tn = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const int pred = scores[i] > threshold ? 1 : 0;
    if (pred == 1 && labels[i] == 1) tp += 1;
    if (pred == 1 && labels[i] == 0) fp += 1;
    if (pred == 0 && labels[i] == 1) fn += 1;
    if (pred == 0 && labels[i] == 0) tn += 1;
  }
  sim = tp == 0 ? 0.0 : 2 * tp / (2 * tp + fp + fn);
  not_sim = tn == 0 ? 0.0 : 2 * tn / (2 * tn + fn + fp);
}

ThresholdOracle midpoint_scan(const std::vector<double>& scores, const std::vector<int>& labels) {
  std::vector<double> u = scores;
  std::sort(u.begin(), u.end());
  u.erase(std::unique(u.begin(), u.end()), u.end());
  ThresholdOracle best;
  best.macro = -1;
  for (std::size_t i = 0; i + 1 < u.size(); ++i) {
    const double t = (u[i] + u[i + 1]) / 2;
    double s, ns;
    f1_pair(scores, labels, t, s, ns);
    if ((s + ns) / 2 > best.macro) best = {t, (s + ns) / 2, s, ns};
  }
  return best;
}

}  // namespace oracle
