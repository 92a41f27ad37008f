#include <doctest.h>

#include <cmath>
#include <limits>

#include "fixtures.hpp"
#include "structemb/checkpoint.hpp"
#include "structemb/error.hpp"
#include "structemb/trainer.hpp"

using namespace structemb;

namespace {

fixture::DeskFixture small_fixture(std::uint64_t seed) {
  return fixture::desk_fixture(seed, 1.0, 0.0, 600, 120, 10, 32, 4, 3);
}

TrainConfig fast_config() {
  TrainConfig c;
  c.lr = 3e-3;
  c.warmup = 10;
  c.epochs = 20;
  c.batch = 32;
  c.eval_every = 50;
  c.seed = 4;
  return c;
}

double decomposition_on(const Model& m, const Batch& data) {
  return global_loss(m, data, LossWeights<double>{1.0, 0.0}).decomposition;
}

}  // namespace

TEST_CASE("zero epochs leave the model unchanged") {
  const auto fx = small_fixture(1);
  const Model start = Model::identity(fx.partition);
  TrainConfig c = fast_config();
  c.epochs = 0;
  const auto r = train(start, fx.train, fx.dev, c);
  CHECK(r.model.weights == start.weights);
  CHECK(r.model.betas == start.betas);
  CHECK(r.history.evals.empty());
  CHECK(r.history.steps == 0);
}

TEST_CASE("training halves the dev decomposition loss") {
  const auto fx = small_fixture(2);
  const Model start = Model::identity(fx.partition);
  const auto r = train(start, fx.train, fx.dev, fast_config());
  const double before = decomposition_on(start, fx.dev);
  const double after = decomposition_on(r.model, fx.dev);
  CAPTURE(before);
  CAPTURE(after);
  CHECK(after <= 0.5 * before);

  // history: every eval_every steps and after the last step
  const long steps_per_epoch = (600 + 31) / 32;
  CHECK(r.history.steps == 20 * steps_per_epoch);
  REQUIRE(!r.history.evals.empty());
  CHECK(r.history.evals.back().step == r.history.steps);
  for (std::size_t i = 0; i + 1 < r.history.evals.size(); ++i) CHECK(r.history.evals[i].step == 50 * long(i + 1));

  // the returned model is the best evaluation
  double best = std::numeric_limits<double>::infinity();
  long best_step = -1;
  for (const auto& e : r.history.evals) {
    if (e.dev_loss < best) {
      best = e.dev_loss;
      best_step = e.step;
    }
  }
  CHECK(r.history.best_step == best_step);
}

TEST_CASE("training is deterministic in the seed") {
  const auto fx = small_fixture(3);
  const Model start = Model::identity(fx.partition);
  TrainConfig c = fast_config();
  c.epochs = 3;
  const auto a = train(start, fx.train, fx.dev, c);
  const auto b = train(start, fx.train, fx.dev, c);
  CHECK(a.model.weights == b.model.weights);
  CHECK(a.model.betas == b.model.betas);
  CHECK(a.history.evals == b.history.evals);

  c.seed = 5;
  const auto other = train(start, fx.train, fx.dev, c);
  CHECK(other.model.weights != a.model.weights);

  fixture::TempDir dir;
  save_checkpoint(a.model, dir.path("a.s3p"));
  save_checkpoint(b.model, dir.path("b.s3p"));
  CHECK(fixture::read_file(dir.path("a.s3p")) == fixture::read_file(dir.path("b.s3p")));
}

TEST_CASE("ablation weights") {
  const auto fx = small_fixture(6);
  const Model start = Model::identity(fx.partition);
  TrainConfig c = fast_config();
  c.epochs = 4;

  // No decomposition: identity is already optimal for consistency.
  c.alpha = 0.0;
  const auto no_dec = train(start, fx.train, fx.dev, c);
  CHECK((no_dec.model.weights - start.weights).norm() < 1e-8);
  CHECK(no_dec.model.betas == start.betas);

  // No consistency: pure decomposition moves the weights.
  c.alpha = 1.0;
  c.consistency_weight = 0.0;
  const auto no_cons = train(start, fx.train, fx.dev, c);
  CHECK((no_cons.model.weights - start.weights).norm() > 1e-3);
  for (const auto& e : no_cons.history.evals) CHECK(e.dev_loss == doctest::Approx(e.dev_decomposition));
}

TEST_CASE("without dev data the final model is kept") {
  const auto fx = small_fixture(7);
  TrainConfig c = fast_config();
  c.epochs = 2;
  const auto r = train(Model::identity(fx.partition), fx.train, Batch{}, c);
  CHECK(r.history.best_step == r.history.steps);
}

TEST_CASE("training errors") {
  const auto fx = small_fixture(8);
  const Model start = Model::identity(fx.partition);
  TrainConfig c = fast_config();
  c.epochs = 1;
  CHECK_THROWS_AS(train(start, Batch{}, fx.dev, c), Error);

  const Model wrong = Model::identity(make_partition(16, 4, 3));
  CHECK_THROWS_AS(train(wrong, fx.train, fx.dev, c), Error);

  Batch bad = fx.train;
  bad.targets(0, 0) = std::numeric_limits<double>::quiet_NaN();
  try {
    train(start, bad, fx.dev, c);
    FAIL("expected NonFiniteLoss");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonFiniteLoss);
    CHECK(std::string(e.what()).find("step") != std::string::npos);
  }
}

TEST_CASE("pair batches from records") {
  EmbeddingTable t;
  t.values.resize(3, 2);
  t.values << 1, 0, 0, 1, 1, 1;
  t.sentences = {"x", "y", "z"};
  PairRecord r;
  r.sentence_a = "z";
  r.sentence_b = "x";
  r.metrics.fill(0.25);
  const Batch b = make_pair_batch({r}, t);
  CHECK(b.first.row(0) == Eigen::RowVector2d(1, 1));
  CHECK(b.second.row(0) == Eigen::RowVector2d(1, 0));
  CHECK(b.targets.cols() == kAspectCount);
  CHECK(b.targets(0, 14) == 0.25);

  r.sentence_b = "missing";
  CHECK_THROWS_AS(make_pair_batch({r}, t), Error);

  const Batch g = gather(small_fixture(9).train, {4, 2, 0}, 1, 3);
  CHECK(g.size() == 2);
}
