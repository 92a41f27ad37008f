#include "structemb/evaluation.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <sstream>

#include <boost/math/distributions/students_t.hpp>

#include "structemb/error.hpp"
#include "structemb/rng.hpp"

namespace structemb {

std::vector<double> average_ranks(std::span<const double> x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(x.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = r;
    i = j + 1;
  }
  return ranks;
}

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error(ErrorCode::Degenerate, "spearman of unequal lengths");
  if (x.size() < 3) throw Error(ErrorCode::Degenerate, "spearman needs at least 3 points");
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const double n = static_cast<double>(x.size());
  const double mean = (n + 1.0) / 2.0;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    const double a = rx[i] - mean;
    const double b = ry[i] - mean;
    sxy += a * b;
    sxx += a * a;
    syy += b * b;
  }
  if (sxx == 0.0 || syy == 0.0) throw Error(ErrorCode::Degenerate, "spearman of a constant input");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::optional<double> try_spearman(std::span<const double> x, std::span<const double> y) {
  try {
    return spearman(x, y);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Degenerate) return std::nullopt;
    throw;
  }
}

std::vector<double> minmax_normalize(std::span<const double> labels) {
  if (labels.empty()) throw Error(ErrorCode::Degenerate, "no labels");
  const auto [lo, hi] = std::minmax_element(labels.begin(), labels.end());
  if (!(*hi > *lo)) throw Error(ErrorCode::Degenerate, "all labels are equal");
  std::vector<double> out;
  out.reserve(labels.size());
  const double span = *hi - *lo;
  for (double v : labels) out.push_back((v - *lo) / span);
  return out;
}

UkpaLabel parse_ukpa_label(std::string_view text) {
  std::string key;
  for (char c : text) {
    if (c == '-' || c == '_' || c == ' ') continue;
    key += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  static const std::map<std::string, UkpaLabel> kLabels = {
      {"dissimilar", UkpaLabel::Dissimilar},         {"ns", UkpaLabel::Dissimilar},
      {"unrelated", UkpaLabel::Unrelated},           {"dtorcd", UkpaLabel::Unrelated},
      {"somewhatsimilar", UkpaLabel::SomewhatSimilar}, {"ss", UkpaLabel::SomewhatSimilar},
      {"highlysimilar", UkpaLabel::HighlySimilar},   {"hs", UkpaLabel::HighlySimilar}};
  auto it = kLabels.find(key);
  if (it == kLabels.end()) throw Error(ErrorCode::UnknownLabel, "'" + std::string(text) + "'");
  return it->second;
}

double likert3_map(UkpaLabel label) {
  switch (label) {
    case UkpaLabel::Dissimilar:
    case UkpaLabel::Unrelated:
      return 0.0;
    case UkpaLabel::SomewhatSimilar:
      return 0.5;
    case UkpaLabel::HighlySimilar:
      return 1.0;
  }
  return 0.0;
}

int binary_map(UkpaLabel label) {
  return label == UkpaLabel::SomewhatSimilar || label == UkpaLabel::HighlySimilar ? 1 : 0;
}

namespace {

double f1(long tp, long fp, long fn) {
  const long denom = 2 * tp + fp + fn;
  return denom == 0 ? 0.0 : 2.0 * static_cast<double>(tp) / static_cast<double>(denom);
}

F1Report f1_on(std::span<const double> scores, std::span<const int> labels,
               std::span<const std::size_t> rows, double threshold) {
  long tp = 0, fp = 0, fn = 0, tn = 0;
  for (std::size_t i : rows) {
    const bool predicted = scores[i] > threshold;
    const bool actual = labels[i] == 1;
    if (predicted && actual) ++tp;
    else if (predicted) ++fp;
    else if (actual) ++fn;
    else ++tn;
  }
  F1Report r;
  r.threshold = threshold;
  r.sim = f1(tp, fp, fn);
  r.not_sim = f1(tn, fn, fp);
  r.macro = 0.5 * (r.sim + r.not_sim);
  return r;
}

std::vector<std::size_t> all_rows(std::size_t n) {
  std::vector<std::size_t> rows(n);
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return rows;
}

}  // namespace

F1Report f1_at_threshold(std::span<const double> scores, std::span<const int> labels,
                         double threshold) {
  return f1_on(scores, labels, all_rows(scores.size()), threshold);
}

std::vector<double> candidate_thresholds(std::span<const double> scores) {
  std::vector<double> sorted(scores.begin(), scores.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < sorted.size(); ++i) out.push_back(0.5 * (sorted[i] + sorted[i + 1]));
  return out;
}

F1Report threshold_search_f1(std::span<const double> scores, std::span<const int> labels,
                             std::span<const std::size_t> search, std::span<const std::size_t> report) {
  if (scores.size() != labels.size()) throw Error(ErrorCode::DimMismatch, "scores and labels differ in length");
  bool has0 = false, has1 = false;
  std::vector<double> search_scores;
  for (std::size_t i : search) {
    (labels[i] == 1 ? has1 : has0) = true;
    search_scores.push_back(scores[i]);
  }
  if (!has0 || !has1) throw Error(ErrorCode::SingleClass, "threshold search needs both classes");

  auto thresholds = candidate_thresholds(search_scores);
  if (thresholds.empty()) thresholds.push_back(search_scores.front());
  double best_threshold = thresholds.front();
  double best_macro = -1.0;
  for (double t : thresholds) {
    const double macro = f1_on(scores, labels, search, t).macro;
    if (macro > best_macro) {
      best_macro = macro;
      best_threshold = t;
    }
  }
  return f1_on(scores, labels, report, best_threshold);
}

F1Report threshold_search_f1(std::span<const double> scores, std::span<const int> labels) {
  const auto rows = all_rows(scores.size());
  return threshold_search_f1(scores, labels, rows, rows);
}

SearchSplit dev_split_per_topic(const std::vector<std::string>& topics, double fraction,
                                std::uint64_t seed) {
  std::map<std::string, std::vector<std::size_t>> by_topic;
  for (std::size_t i = 0; i < topics.size(); ++i) by_topic[topics[i]].push_back(i);
  Rng rng(seed);
  SearchSplit out;
  for (auto& [topic, rows] : by_topic) {
    rng.shuffle(rows);
    auto take = static_cast<std::size_t>(std::lround(fraction * static_cast<double>(rows.size())));
    if (rows.size() >= 2) take = std::clamp<std::size_t>(take, 1, rows.size() - 1);
    out.search.insert(out.search.end(), rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(take));
    out.report.insert(out.report.end(), rows.begin() + static_cast<std::ptrdiff_t>(take), rows.end());
  }
  std::sort(out.search.begin(), out.search.end());
  std::sort(out.report.begin(), out.report.end());
  return out;
}

std::vector<FeatureRow> feature_analysis(const Eigen::MatrixXd& features,
                                         const std::vector<std::string>& names,
                                         std::span<const double> system_sim,
                                         std::span<const double> human) {
  if (static_cast<std::size_t>(features.cols()) != names.size()) {
    throw Error(ErrorCode::DimMismatch, "one name per feature column required");
  }
  if (static_cast<std::size_t>(features.rows()) != system_sim.size() ||
      system_sim.size() != human.size()) {
    throw Error(ErrorCode::DimMismatch, "feature rows, system and human scores differ in length");
  }
  if (features.rows() < 3) throw Error(ErrorCode::Degenerate, "feature analysis needs at least 3 pairs");
  std::vector<FeatureRow> rows;
  for (Eigen::Index c = 0; c < features.cols(); ++c) {
    const Eigen::VectorXd col = features.col(c);
    const std::span<const double> x(col.data(), static_cast<std::size_t>(col.size()));
    rows.push_back({names[static_cast<std::size_t>(c)], try_spearman(x, system_sim), try_spearman(x, human)});
  }
  return rows;
}

std::string feature_table_csv(const std::vector<FeatureRow>& rows) {
  auto cell = [](const std::optional<double>& v) {
    if (!v) return std::string("nan");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", 100.0 * *v);
    return std::string(buf);
  };
  std::ostringstream out;
  out << "feature,vs_sim,vs_hum\n";
  for (const auto& r : rows) out << r.feature << ',' << cell(r.vs_sim) << ',' << cell(r.vs_hum) << '\n';
  return out.str();
}

TTestResult paired_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2) {
    throw Error(ErrorCode::Degenerate, "paired t-test needs two equal-length samples of size >= 2");
  }
  const double n = static_cast<double>(a.size());
  double mean = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) mean += a[i] - b[i];
  mean /= n;
  double var = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) var += (a[i] - b[i] - mean) * (a[i] - b[i] - mean);
  var /= n - 1.0;
  if (var == 0.0) throw Error(ErrorCode::Degenerate, "paired differences are constant");
  TTestResult r;
  r.t = mean / std::sqrt(var / n);
  boost::math::students_t dist(n - 1.0);
  r.p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(r.t)));
  return r;
}

}  // namespace structemb
