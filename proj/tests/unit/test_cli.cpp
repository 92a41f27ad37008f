#include <doctest.h>

#include <sstream>

#include "fixtures.hpp"
#include "structemb/aspects.hpp"
#include "structemb/baselines.hpp"
#include "structemb/checkpoint.hpp"
#include "structemb/cli.hpp"
#include "structemb/dataset.hpp"

using namespace structemb;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli_dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

// Sentence pairs with graphs, a built dataset, random embeddings for every
// sentence and an STS-style TSV.
struct Workspace {
  fixture::TempDir dir;
  std::vector<std::string> sentences;

  Workspace() {
    Rng rng(21);
    std::ostringstream pairs;
    fixture::GraphOptions opt;
    opt.max_vars = 4;
    for (int i = 0; i < 16; ++i) {
      for (const char* side : {" a", " b"}) {
        sentences.push_back("s" + std::to_string(i) + side);
        pairs << "# ::snt " << sentences.back() << "\n" << serialize_penman(fixture::random_graph(rng, opt)) << "\n\n";
      }
    }
    fixture::write_file(path("pairs.penman"), pairs.str());
    std::vector<std::vector<float>> rows;
    for (std::size_t i = 0; i < sentences.size(); ++i) {
      std::vector<float> r(24);
      for (auto& v : r) v = static_cast<float>(rng.normal());
      rows.push_back(r);
    }
    fixture::write_emb1(path("sents.emb"), rows, sentences);
    std::ostringstream sts;
    for (std::size_t i = 0; i < sentences.size(); i += 2) sts << sentences[i] << '\t' << sentences[i + 1] << '\t' << i % 5 << '\n';
    fixture::write_file(path("sts.tsv"), sts.str());
    fixture::write_file(path("run.cfg"), "d = 24\nh = 1\nepochs = 2\nbatch = 8\neval_every = 3\nlr = 0.001\nwarmup = 1\n");
  }

  std::string path(const std::string& name) const { return dir.path(name); }

  Run build(const std::string& stem, int jobs) const {
    return run({"dataset", "build", "--pairs", path("pairs.penman"), "--out", path(stem + ".jsonl"), "--seed", "2", "--dev",
                "3", "--test", "3", "--jobs", std::to_string(jobs)});
  }
};

}  // namespace

TEST_CASE("usage errors exit with 1") {
  CHECK(run({}).code == 1);
  CHECK(run({"frobnicate"}).code == 1);
  CHECK(run({"score", "--restarts"}).code == 1);
  CHECK(run({"partition", "rand"}).code == 1);   // --out missing
  CHECK(run({"eval", "sts", "--data", "x.tsv"}).code == 1);  // --embeddings missing
  CHECK(run({"dataset"}).code == 1);
}

TEST_CASE("help lists the flags") {
  const auto top = run({"--help"});
  CHECK(top.code == 0);
  for (const char* sub : {"amr", "score", "dataset", "train", "eval", "partition", "analyze", "ablate"}) {
    CHECK((top.out + top.err).find(sub) != std::string::npos);
  }
  const auto train = run({"train", "--help"});
  CHECK(train.code == 0);
  for (const char* flag : {"--config", "--seed", "--no-consistency", "--no-decomposition", "--lr", "--sub-dim"}) {
    CHECK((train.out + train.err).find(flag) != std::string::npos);
  }
}

TEST_CASE("amr parse and check") {
  fixture::TempDir dir;
  fixture::write_file(dir.path("g.penman"),
                      "# ::snt Cats sleep.\n(s / sleep-01 :ARG0 (c / cat))\n\n(x / broken :ARG0\n\n(d / dog)\n");
  const auto check = run({"amr", "check", dir.path("g.penman")});
  CHECK(check.code == 2);
  const auto rows = lines(check.out);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == "0\tok\t2");
  CHECK(rows[1].rfind("1\terror\t", 0) == 0);
  CHECK(rows[2] == "2\tok\t1");

  fixture::write_file(dir.path("ok.penman"), "# ::snt Cats sleep.\n(s / sleep-01\n   :ARG0 (c / cat))\n");
  const auto parsed = run({"amr", "parse", dir.path("ok.penman")});
  CHECK(parsed.code == 0);
  CHECK(parsed.out == "# ::snt Cats sleep.\n(s / sleep-01 :ARG0 (c / cat))\n\n");
  CHECK(run({"amr", "parse", dir.path("g.penman")}).code == 2);
  CHECK(run({"amr", "check", dir.path("nope.penman")}).code == 2);
}

TEST_CASE("score prints every aspect in order") {
  fixture::TempDir dir;
  fixture::write_file(dir.path("a.penman"), "(s / sleep-01 :ARG0 (c / cat))\n\n(d / dog)\n");
  fixture::write_file(dir.path("b.penman"), "(s / sleep-01 :ARG0 (c / cat))\n\n(c / cat)\n");
  const auto r = run({"score", dir.path("a.penman"), dir.path("b.penman")});
  REQUIRE(r.code == 0);
  const auto rows = lines(r.out);
  REQUIRE(rows.size() == static_cast<std::size_t>(kAspectCount));
  for (int k = 0; k < kAspectCount; ++k) {
    CHECK(rows[k].rfind(std::string(aspect_name(all_aspects()[k])) + "\t1.000000\t", 0) == 0);
  }
  CHECK(rows[0] == "Smatch\t1.000000\t0.000000");

  const auto some = run({"score", "--metrics", "WLK,Concepts", dir.path("a.penman"), dir.path("b.penman")});
  CHECK(lines(some.out).size() == 2);
  CHECK(run({"score", "--metrics", "Nope", dir.path("a.penman"), dir.path("b.penman")}).code == 2);
  fixture::write_file(dir.path("one.penman"), "(d / dog)\n");
  CHECK(run({"score", dir.path("a.penman"), dir.path("one.penman")}).code == 2);
}

TEST_CASE("dataset build is independent of the job count") {
  Workspace ws;
  const auto one = ws.build("one", 1);
  const auto four = ws.build("four", 4);
  REQUIRE(one.code == 0);
  REQUIRE(four.code == 0);
  CHECK(one.out.find("records\t32") != std::string::npos);
  for (const char* part : {"", ".train", ".dev", ".test"}) {
    const auto a = fixture::read_file(ws.path(std::string("one") + part + ".jsonl"));
    CHECK(!a.empty());
    CHECK(a == fixture::read_file(ws.path(std::string("four") + part + ".jsonl")));
  }
  CHECK(read_jsonl(ws.path("one.dev.jsonl")).size() == 3);
  CHECK(read_jsonl(ws.path("one.train.jsonl")).size() == 26);

  const auto s = run({"dataset", "split", "--in", ws.path("one.jsonl"), "--out-prefix", ws.path("again"), "--seed", "2",
                      "--dev", "3", "--test", "3"});
  CHECK(s.code == 0);
  CHECK(fixture::read_file(ws.path("again.dev.jsonl")) == fixture::read_file(ws.path("one.dev.jsonl")));
}

TEST_CASE("partition rand writes an assignment") {
  fixture::TempDir dir;
  const auto r = run({"partition", "rand", "--dim", "48", "--sub-dim", "2", "--seed", "4", "--out", dir.path("p.json")});
  REQUIRE(r.code == 0);
  CHECK(r.out == "assigned\t30\tof\t48\n");
  CHECK(read_assignment_json(dir.path("p.json"), 48) == sb_rand_partition(48, 2, kAspectCount, 4));
  CHECK(run({"partition", "rand", "--dim", "16", "--out", dir.path("q.json")}).code == 2);
}

TEST_CASE("train, eval and analyze") {
  Workspace ws;
  REQUIRE(ws.build("data", 2).code == 0);
  const std::vector<std::string> base{"train", "--config", ws.path("run.cfg"), "--seed", "3", "--train",
                                      ws.path("data.train.jsonl"), "--dev", ws.path("data.dev.jsonl"), "--embeddings",
                                      ws.path("sents.emb")};
  auto with = [&](std::vector<std::string> extra) {
    auto args = base;
    args.insert(args.end(), extra.begin(), extra.end());
    return run(args);
  };
  const auto a = with({"--out", ws.path("a.ckpt")});
  const auto b = with({"--out", ws.path("b.ckpt")});
  REQUIRE(a.code == 0);
  REQUIRE(b.code == 0);
  CHECK(a.out == b.out);
  CHECK(lines(a.out).front() == "step\tdev_loss\tdev_decomposition\tdev_consistency");
  CHECK(fixture::read_file(ws.path("a.ckpt")) == fixture::read_file(ws.path("b.ckpt")));
  const Model m = load_checkpoint(ws.path("a.ckpt"));
  CHECK(m.dim() == 24);
  CHECK(m.partition.residual().size() == 24 - kAspectCount);

  // flags override the config file
  const auto faster = with({"--lr", "0.01", "--no-consistency", "--out", ws.path("c.ckpt")});
  REQUIRE(faster.code == 0);
  CHECK(fixture::read_file(ws.path("c.ckpt")) != fixture::read_file(ws.path("a.ckpt")));
  CHECK(with({"--out", ws.path("d.ckpt"), "--sub-dim", "2"}).code == 2);  // 15 x 2 > 24
  fixture::write_file(ws.path("wide.cfg"), "d = 24\nh = 2\nepochs = 1\nbatch = 8\n");
  auto args = base;
  args[2] = ws.path("wide.cfg");
  args.insert(args.end(), {"--out", ws.path("e.ckpt")});
  CHECK(run(args).code == 2);
  args.insert(args.end(), {"--sub-dim", "1"});
  CHECK(run(args).code == 0);

  const auto sts = run({"eval", "sts", "--data", ws.path("sts.tsv"), "--embeddings", ws.path("sents.emb"), "--model",
                        ws.path("a.ckpt")});
  REQUIRE(sts.code == 0);
  const auto sts_rows = lines(sts.out);
  REQUIRE(sts_rows.size() == 2);
  CHECK(sts_rows[0] == "dataset,n,spearman");
  CHECK(sts_rows[1].rfind("sts,16,", 0) == 0);

  const auto aspects = run({"eval", "sick", "--report", "aspects", "--pairs", ws.path("data.test.jsonl"), "--embeddings",
                            ws.path("sents.emb"), "--model", ws.path("a.ckpt")});
  REQUIRE(aspects.code == 0);
  const auto rows = lines(aspects.out);
  REQUIRE(rows.size() == static_cast<std::size_t>(kAspectCount + 1));
  CHECK(rows[0] == "aspect,spearman");
  for (int k = 0; k < kAspectCount; ++k) CHECK(rows[k + 1].rfind(std::string(aspect_name(all_aspects()[k])) + ",", 0) == 0);

  const auto plain = run({"eval", "sts", "--data", ws.path("sts.tsv"), "--embeddings", ws.path("sents.emb")});
  CHECK(plain.code == 0);

  const auto features = run({"analyze", "features", "--data", ws.path("sts.tsv"), "--embeddings", ws.path("sents.emb"),
                             "--model", ws.path("a.ckpt")});
  REQUIRE(features.code == 0);
  const auto frows = lines(features.out);
  REQUIRE(frows.size() == static_cast<std::size_t>(kAspectCount + 2));
  CHECK(frows[0] == "feature,vs_sim,vs_hum");
  CHECK(frows.back().rfind("Residual,", 0) == 0);

  // unknown sentences and mismatched dims are data errors
  fixture::write_file(ws.path("odd.tsv"), "never seen\ts0 a\t3\nx\ty\t1\n");
  CHECK(run({"eval", "sts", "--data", ws.path("odd.tsv"), "--embeddings", ws.path("sents.emb")}).code == 2);
  CHECK(run({"eval", "sts", "--data", ws.path("sts.tsv"), "--embeddings", ws.path("missing.emb")}).code == 2);
}
