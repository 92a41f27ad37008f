#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "structemb/error.hpp"
#include "structemb/lexical.hpp"

using namespace structemb;

namespace {

ErrorCode load_error(const std::string& path) {
  try {
    load_vectors(path);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected load_vectors to fail");
  return ErrorCode::EmptyInput;
}

WordVectorTable toy_table() {
  WordVectorTable t;
  t.add("a", Eigen::Vector2d(1, 0));
  t.add("b", Eigen::Vector2d(0, 1));
  t.add("smoke", Eigen::Vector2d(1, 0));
  t.add("suck", Eigen::Vector2d(0.4, std::sqrt(1 - 0.16)));
  return t;
}

}  // namespace

TEST_CASE("load vectors") {
  fixture::TempDir dir;
  const auto good = dir.path("v.txt");
  fixture::write_file(good, "cat 1 0 0\nDog 0 1 0\n");
  const auto t = load_vectors(good);
  CHECK(t.dim() == 3);
  CHECK(t.size() == 2);
  REQUIRE(t.find("dog") != nullptr);
  CHECK((*t.find("dog"))(1) == 1.0);
  CHECK(t.find("bird") == nullptr);

  const auto mixed = dir.path("mixed.txt");
  fixture::write_file(mixed, "cat 1 0 0\ndog 0 1\n");
  CHECK(load_error(mixed) == ErrorCode::DimMismatch);

  const auto empty = dir.path("empty.txt");
  fixture::write_file(empty, "");
  CHECK(load_error(empty) == ErrorCode::EmptyTable);

  CHECK(load_error(dir.path("missing.txt")) == ErrorCode::Unreadable);
}

TEST_CASE("normalize labels") {
  CHECK(normalize_label("like-01") == "like");
  CHECK(normalize_label("Smoke-02") == "smoke");
  CHECK(normalize_label("cat") == "cat");
  CHECK(normalize_label("New-York") == "new-york");
}

TEST_CASE("label similarity") {
  const auto t = toy_table();
  CHECK(label_similarity(&t, "a", "b") == doctest::Approx(0.0));
  CHECK(label_similarity(&t, "a", "a") == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(label_similarity(&t, "smoke-02", "suck-01") == doctest::Approx(0.4));

  // out of vocabulary: exact-match indicator
  CHECK(label_similarity(&t, "zebra", "zebra") == 1.0);
  CHECK(label_similarity(&t, "zebra", "a") == 0.0);
  CHECK(label_similarity(nullptr, "cat", "cat") == 1.0);
  CHECK(label_similarity(nullptr, "cat", "dog") == 0.0);
  CHECK(label_similarity(nullptr, "like-01", "like-02") == 1.0);
}

TEST_CASE("property: symmetric and bounded") {
  WordVectorTable t;
  Rng rng(3);
  const char* words[] = {"w0", "w1", "w2", "w3", "w4", "w5"};
  for (const char* w : words) {
    Eigen::VectorXd v(5);
    for (int i = 0; i < 5; ++i) v(i) = rng.normal();
    t.add(w, v);
  }
  for (const char* x : words) {
    CHECK(label_similarity(&t, x, x) == doctest::Approx(1.0).epsilon(1e-9));
    for (const char* y : {"w0", "w3", "oov"}) {
      const double s = label_similarity(&t, x, y);
      CHECK(s == label_similarity(&t, y, x));
      CHECK(s >= -1.0);
      CHECK(s <= 1.0);
    }
  }
}

TEST_CASE("duplicates keep the first vector, dims must agree") {
  WordVectorTable t;
  t.add("x", Eigen::Vector2d(1, 0));
  t.add("x", Eigen::Vector2d(0, 1));
  CHECK((*t.find("x"))(0) == 1.0);
  CHECK_THROWS_AS(t.add("y", Eigen::Vector3d(1, 0, 0)), Error);
}
