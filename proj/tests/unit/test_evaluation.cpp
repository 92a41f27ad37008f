#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "structemb/error.hpp"
#include "structemb/evaluation.hpp"
#include "structemb/rng.hpp"

using namespace structemb;

namespace {

std::vector<double> random_values(Rng& rng, std::size_t n, int distinct) {
  std::vector<double> v(n);
  for (auto& x : v) x = distinct > 0 ? static_cast<double>(rng.below(static_cast<std::uint64_t>(distinct))) : rng.normal();
  return v;
}

}  // namespace

TEST_CASE("average ranks") {
  const std::vector<double> x{10, 20, 20, 5, 20};
  CHECK(average_ranks(x) == std::vector<double>{2, 4, 4, 1, 4});
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const auto v = random_values(rng, 12, 4);
    CHECK(average_ranks(v) == oracle::naive_average_ranks(v));
  }
}

TEST_CASE("spearman") {
  const std::vector<double> a{1, 2, 3, 4, 5};
  const std::vector<double> rev{5, 4, 3, 2, 1};
  CHECK(spearman(a, a) == doctest::Approx(1.0));
  CHECK(spearman(a, rev) == doctest::Approx(-1.0));

  // average ranks (1, 2.5, 2.5, 4) vs (1, 3, 2, 4)
  CHECK(spearman(std::vector<double>{1, 2, 2, 4}, std::vector<double>{1, 3, 2, 4}) ==
        doctest::Approx(std::sqrt(0.9)));

  CHECK_THROWS_AS(spearman(std::vector<double>{1, 1, 1}, std::vector<double>{1, 2, 3}), Error);
  CHECK_THROWS_AS(spearman(std::vector<double>{1, 2}, std::vector<double>{1, 2}), Error);
  CHECK_THROWS_AS(spearman(std::vector<double>{1, 2, 3}, std::vector<double>{1, 2}), Error);
  CHECK_FALSE(try_spearman(std::vector<double>{1, 1, 1}, std::vector<double>{1, 2, 3}).has_value());
}

TEST_CASE("property: spearman matches the oracle and ignores monotone maps") {
  Rng rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 3 + rng.below(20);
    auto x = random_values(rng, n, trial % 2 ? 5 : 0);
    auto y = random_values(rng, n, trial % 3 ? 0 : 4);
    const auto expected = [&]() -> std::optional<double> {
      if (std::set<double>(x.begin(), x.end()).size() < 2 || std::set<double>(y.begin(), y.end()).size() < 2)
        return std::nullopt;
      return oracle::naive_spearman(x, y);
    }();
    const auto got = try_spearman(x, y);
    REQUIRE(got.has_value() == expected.has_value());
    if (!got) continue;
    CHECK(*got == doctest::Approx(*expected).epsilon(1e-12));
    CHECK(*got == doctest::Approx(*try_spearman(y, x)).epsilon(1e-12));

    std::vector<double> fx, gy;
    for (double v : x) fx.push_back(std::exp(v) * 3.0 - 7.0);
    for (double v : y) gy.push_back(v * v * v + 2.0 * v);
    CHECK(*try_spearman(fx, gy) == doctest::Approx(*got).epsilon(1e-12));
  }
}

TEST_CASE("minmax") {
  const std::vector<double> likert{0, 1, 2, 3, 4, 5};
  const auto n = minmax_normalize(likert);
  for (int i = 0; i <= 5; ++i) CHECK(n[i] == doctest::Approx(0.2 * i));
  const std::vector<double> unit{0.0, 0.3, 1.0};
  CHECK(minmax_normalize(unit) == unit);
  CHECK_THROWS_AS(minmax_normalize(std::vector<double>{2, 2, 2}), Error);
}

TEST_CASE("ukpa labels") {
  CHECK(likert3_map(parse_ukpa_label("unrelated")) == 0.0);
  CHECK(likert3_map(parse_ukpa_label("dissimilar")) == 0.0);
  CHECK(likert3_map(parse_ukpa_label("somewhat-similar")) == 0.5);
  CHECK(likert3_map(parse_ukpa_label("highly-similar")) == 1.0);
  CHECK(binary_map(parse_ukpa_label("highly similar")) == 1);
  CHECK(binary_map(parse_ukpa_label("Somewhat_Similar")) == 1);
  CHECK(binary_map(parse_ukpa_label("unrelated")) == 0);
  CHECK(binary_map(parse_ukpa_label("dissimilar")) == 0);
  CHECK(parse_ukpa_label("HS") == UkpaLabel::HighlySimilar);
  CHECK(parse_ukpa_label("SS") == UkpaLabel::SomewhatSimilar);
  CHECK(parse_ukpa_label("DTORCD") == UkpaLabel::Unrelated);
  CHECK(parse_ukpa_label("NS") == UkpaLabel::Dissimilar);
  CHECK_THROWS_AS(parse_ukpa_label("kind of"), Error);
  for (auto l : {UkpaLabel::Dissimilar, UkpaLabel::Unrelated, UkpaLabel::SomewhatSimilar, UkpaLabel::HighlySimilar}) {
    CHECK(likert3_map(l) >= 0.0);
    CHECK(binary_map(l) >= 0);
  }
}

TEST_CASE("f1 and thresholds") {
  const std::vector<double> scores{0.1, 0.2, 0.8, 0.9};
  const std::vector<int> labels{0, 0, 1, 1};
  const auto r = threshold_search_f1(scores, labels);
  CHECK(r.threshold == doctest::Approx(0.5));
  CHECK(r.macro == 1.0);
  CHECK(r.sim == 1.0);
  CHECK(r.not_sim == 1.0);

  CHECK(candidate_thresholds(std::vector<double>{3, 1, 1, 2}) == std::vector<double>{1.5, 2.5});

  const auto f = f1_at_threshold(scores, labels, 0.15);
  // predicts {0, 1, 1, 1}: sim P = 2/3 R = 1; not-sim P = 1 R = 1/2
  CHECK(f.sim == doctest::Approx(0.8));
  CHECK(f.not_sim == doctest::Approx(2.0 / 3.0));
  CHECK(f.macro == doctest::Approx((0.8 + 2.0 / 3.0) / 2));

  CHECK_THROWS_AS(threshold_search_f1(scores, std::vector<int>{1, 1, 1, 1}), Error);
}

TEST_CASE("property: threshold search equals the midpoint scan") {
  Rng rng(15);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 4 + rng.below(25);
    std::vector<double> scores(n);
    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
      labels[i] = static_cast<int>(rng.below(2));
      scores[i] = static_cast<double>(rng.below(10)) / 10.0 + (trial % 2 ? 0.3 * labels[i] : 0.0);
    }
    labels[0] = 0;
    labels[1] = 1;
    const auto want = oracle::midpoint_scan(scores, labels);
    const auto got = threshold_search_f1(scores, labels);
    CHECK(got.threshold == want.threshold);
    CHECK(got.macro == doctest::Approx(want.macro));
    CHECK(got.sim == doctest::Approx(want.sim));
    CHECK(got.not_sim == doctest::Approx(want.not_sim));
    for (double t : candidate_thresholds(scores)) CHECK(f1_at_threshold(scores, labels, t).macro <= got.macro + 1e-12);
  }
}

TEST_CASE("search and report splits") {
  const std::vector<double> scores{0.1, 0.9, 0.2, 0.8, 0.6, 0.4};
  const std::vector<int> labels{0, 1, 0, 1, 0, 1};
  const std::vector<std::size_t> search{0, 1, 2, 3};
  const std::vector<std::size_t> report{4, 5};
  const auto r = threshold_search_f1(scores, labels, search, report);
  CHECK(r.threshold == doctest::Approx(0.5));
  CHECK(r.macro == 0.0);  // 0.6 -> 1 and 0.4 -> 0 are both wrong

  std::vector<std::string> topics{"a", "a", "a", "a", "b", "b", "c"};
  const auto s = dev_split_per_topic(topics, 0.5, 3);
  CHECK(s.search.size() + s.report.size() == topics.size());
  std::set<std::size_t> all(s.search.begin(), s.search.end());
  all.insert(s.report.begin(), s.report.end());
  CHECK(all.size() == topics.size());
  std::map<std::string, int> held;
  for (auto i : s.search) ++held[topics[i]];
  CHECK(held["a"] == 2);
  CHECK(held["b"] == 1);
  CHECK(s.search == dev_split_per_topic(topics, 0.5, 3).search);
}

TEST_CASE("feature analysis") {
  const std::vector<double> sim{0.1, 0.5, 0.3, 0.9, 0.7};
  const std::vector<double> hum{1, 4, 2, 5, 3};
  Eigen::MatrixXd f(5, 3);
  for (int i = 0; i < 5; ++i) f.row(i) << hum[i] * 2.0, sim[i], 1.0;
  const auto rows = feature_analysis(f, {"Frames", "Residual", "Flat"}, sim, hum);
  REQUIRE(rows.size() == 3);
  CHECK(*rows[0].vs_hum == doctest::Approx(1.0));
  CHECK(*rows[1].vs_sim == doctest::Approx(1.0));
  CHECK_FALSE(rows[2].vs_sim.has_value());
  CHECK(feature_table_csv(rows) ==
        "feature,vs_sim,vs_hum\nFrames,90.0,100.0\nResidual,100.0,90.0\nFlat,nan,nan\n");

  CHECK_THROWS_AS(feature_analysis(f, {"x"}, sim, hum), Error);
  CHECK_THROWS_AS(feature_analysis(f.topRows(2), {"a", "b", "c"}, std::vector<double>{1, 2}, std::vector<double>{1, 2}), Error);

  // a shuffled feature correlates weakly with the system scores
  Rng rng(2);
  const std::size_t n = 400;
  std::vector<double> s(n), h(n);
  Eigen::MatrixXd g(n, 1);
  for (std::size_t i = 0; i < n; ++i) {
    s[i] = rng.normal();
    h[i] = s[i] + 0.1 * rng.normal();
    g(static_cast<Eigen::Index>(i), 0) = rng.normal();
  }
  CHECK(std::abs(*feature_analysis(g, {"noise"}, s, h)[0].vs_sim) < 0.2);
}

TEST_CASE("paired t-test") {
  const auto r = paired_t_test(std::vector<double>{1, 2, 3, 4}, std::vector<double>{0, 0, 1, 1});
  CHECK(r.t == doctest::Approx(4.898979485566356));
  CHECK(r.p == doctest::Approx(0.01627660345942856).epsilon(1e-9));
  const auto s = paired_t_test(std::vector<double>{0, 0, 1, 1}, std::vector<double>{1, 2, 3, 4});
  CHECK(s.t == doctest::Approx(-r.t));
  CHECK(s.p == doctest::Approx(r.p));
  CHECK_THROWS_AS(paired_t_test(std::vector<double>{1}, std::vector<double>{2}), Error);
  CHECK_THROWS_AS(paired_t_test(std::vector<double>{1, 2}, std::vector<double>{0, 1}), Error);
}
