#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace structemb {

// Ranks starting at 1; tied values share the mean of their ranks.
std::vector<double> average_ranks(std::span<const double> x);

// Pearson correlation of the average ranks. Throws Degenerate for n < 3,
// unequal lengths, or a constant input.
double spearman(std::span<const double> x, std::span<const double> y);

// As spearman, but nullopt where it would throw Degenerate.
std::optional<double> try_spearman(std::span<const double> x, std::span<const double> y);

// (x - min) / (max - min). Throws Degenerate when all labels are equal.
std::vector<double> minmax_normalize(std::span<const double> labels);

enum class UkpaLabel { Dissimilar, Unrelated, SomewhatSimilar, HighlySimilar };

// Accepts dissimilar / unrelated / somewhat-similar / highly-similar (any
// case, '-', '_' or ' ' as separator) and the corpus codes NS / DTORCD /
// SS / HS. Throws UnknownLabel.
UkpaLabel parse_ukpa_label(std::string_view text);

// dissimilar, unrelated -> 0; somewhat similar -> 0.5; highly similar -> 1
double likert3_map(UkpaLabel label);
// similar labels -> 1, the other two -> 0
int binary_map(UkpaLabel label);

struct F1Report {
  double threshold = 0.0;
  double macro = 0.0;
  double sim = 0.0;      // F1 of class 1
  double not_sim = 0.0;  // F1 of class 0
};

// Predicts 1 where score > threshold.
F1Report f1_at_threshold(std::span<const double> scores, std::span<const int> labels,
                         double threshold);

// Midpoints between adjacent distinct scores, ascending.
std::vector<double> candidate_thresholds(std::span<const double> scores);

// Picks the midpoint threshold with the best macro F1 on `search` (first one
// on ties) and reports F1 on `report`. Throws SingleClass if the search
// rows hold only one class.
F1Report threshold_search_f1(std::span<const double> scores, std::span<const int> labels,
                             std::span<const std::size_t> search, std::span<const std::size_t> report);

// Search and report on all rows.
F1Report threshold_search_f1(std::span<const double> scores, std::span<const int> labels);

struct SearchSplit {
  std::vector<std::size_t> search;
  std::vector<std::size_t> report;
};

// Holds out round(fraction * n_topic) rows of every topic (at least one when
// the topic has two or more rows) for threshold search; the rest is reported.
SearchSplit dev_split_per_topic(const std::vector<std::string>& topics, double fraction,
                                std::uint64_t seed);

struct FeatureRow {
  std::string feature;
  std::optional<double> vs_sim;  // nullopt marks a degenerate column
  std::optional<double> vs_hum;
};

// Spearman of every feature column against the system similarity and the
// human scores.
std::vector<FeatureRow> feature_analysis(const Eigen::MatrixXd& features,
                                         const std::vector<std::string>& names,
                                         std::span<const double> system_sim,
                                         std::span<const double> human);

// `feature,vs_sim,vs_hum` with values x 100 to one decimal; `nan` for
// degenerate cells.
std::string feature_table_csv(const std::vector<FeatureRow>& rows);

struct TTestResult {
  double t = 0.0;
  double p = 1.0;  // two-sided
};

// Paired Student t-test, e.g. over per-seed scores of two systems.
TTestResult paired_t_test(std::span<const double> a, std::span<const double> b);

}  // namespace structemb
