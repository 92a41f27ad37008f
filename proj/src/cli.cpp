#include "structemb/cli.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"

#include "structemb/amr_graph.hpp"
#include "structemb/aspects.hpp"
#include "structemb/baselines.hpp"
#include "structemb/checkpoint.hpp"
#include "structemb/config.hpp"
#include "structemb/dataset.hpp"
#include "structemb/embedding_io.hpp"
#include "structemb/error.hpp"
#include "structemb/evaluation.hpp"
#include "structemb/lexical.hpp"
#include "structemb/parallel.hpp"
#include "structemb/rng.hpp"
#include "structemb/trainer.hpp"

namespace structemb {

namespace {

// ---- shared helpers ------------------------------------------------------

std::string fmt_score(double v) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(6) << v;
  return s.str();
}

// x100 with one decimal, "nan" for undefined cells
std::string fmt_percent(std::optional<double> v) {
  if (!v) return "nan";
  std::ostringstream s;
  s << std::fixed << std::setprecision(1) << 100.0 * *v;
  return s.str();
}

std::string strip_jsonl(const std::string& path) {
  const std::string ext = ".jsonl";
  if (path.size() > ext.size() && path.compare(path.size() - ext.size(), ext.size(), ext) == 0) {
    return path.substr(0, path.size() - ext.size());
  }
  return path;
}

void write_split(const DataSplit& s, const std::string& prefix, std::ostream& out) {
  write_jsonl(s.train, prefix + ".train.jsonl");
  write_jsonl(s.dev, prefix + ".dev.jsonl");
  write_jsonl(s.test, prefix + ".test.jsonl");
  out << "train\t" << s.train.size() << "\ndev\t" << s.dev.size() << "\ntest\t" << s.test.size() << '\n';
}

struct MetricFlags {
  std::string word_vectors;
  int restarts = 4;
  std::uint64_t seed = 0;
  int wl_iterations = 2;
  int jobs = 1;

  void add_to(CLI::App* app, bool with_seed) {
    app->add_option("--word-vectors", word_vectors, "Plain-text word vector file for lexical similarity");
    app->add_option("--restarts", restarts, "Smatch hill-climbing starts")->check(CLI::PositiveNumber);
    if (with_seed) app->add_option("--seed", seed, "Random seed");
    app->add_option("--wl-iterations", wl_iterations, "WL iterations")->check(CLI::NonNegativeNumber);
    app->add_option("--jobs", jobs, "Worker threads (output order is unaffected)")->check(CLI::PositiveNumber);
  }
};

struct LoadedVectors {
  std::optional<WordVectorTable> table;
  const WordVectorTable* get() const { return table ? &*table : nullptr; }
};

LoadedVectors load_optional_vectors(const std::string& path) {
  LoadedVectors v;
  if (!path.empty()) v.table = load_vectors(path);
  return v;
}

// Rows of a sentence-pair TSV: sentence_a, sentence_b, label, optional topic.
struct LabeledPair {
  std::string a, b, label, topic;
};

std::vector<LabeledPair> read_pair_tsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Unreadable, "cannot open '" + path + "'");
  std::vector<LabeledPair> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::stringstream ss(line);
    std::string col;
    while (std::getline(ss, col, '\t')) cols.push_back(col);
    if (cols.size() < 3) {
      throw Error(ErrorCode::MalformedRecord,
                  path + ":" + std::to_string(line_no) + ": expected sentence_a, sentence_b, label");
    }
    if (line_no == 1 && cols[2] == "label") continue;
    rows.push_back({cols[0], cols[1], cols[2], cols.size() > 3 ? cols[3] : std::string()});
  }
  if (rows.empty()) throw Error(ErrorCode::EmptyData, path + ": no rows");
  return rows;
}

std::vector<double> real_labels(const std::vector<LabeledPair>& rows) {
  std::vector<double> out;
  for (const auto& r : rows) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(r.label, &used));
      if (used != r.label.size()) throw std::invalid_argument(r.label);
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::MalformedRecord, "label is not a number: '" + r.label + "'");
    }
  }
  return out;
}

// What produces similarities: a trained head, a dimension assignment over the
// raw teacher embeddings, or the raw teacher alone.
struct Scorer {
  std::optional<Model> model;
  std::optional<DimensionAssignment> assignment;

  double overall(const Eigen::VectorXd& e, const Eigen::VectorXd& e2) const {
    return model ? model_similarity(*model, e, e2) : cosine(e, e2);
  }
  Eigen::VectorXd aspects(const Eigen::VectorXd& e, const Eigen::VectorXd& e2) const {
    if (model) return scaled_predictions(*model, e, e2);
    if (assignment) return assignment_predict(*assignment, e, e2);
    return sb_full_predict(e, e2, kAspectCount);
  }
};

Scorer make_scorer(const std::string& model_path, const std::string& assignment_path, Eigen::Index dim) {
  Scorer s;
  if (!model_path.empty() && !assignment_path.empty()) {
    throw Error(ErrorCode::BadConfig, "--model and --assignment are mutually exclusive");
  }
  if (!model_path.empty()) {
    s.model = load_checkpoint(model_path);
    if (s.model->dim() != dim) {
      throw Error(ErrorCode::DimMismatch, "checkpoint dim " + std::to_string(s.model->dim()) +
                                              " does not match embedding dim " + std::to_string(dim));
    }
  }
  if (!assignment_path.empty()) {
    s.assignment = read_assignment_json(assignment_path, dim);
    if (s.assignment->aspect_count() != kAspectCount || !s.assignment->covers_all_aspects()) {
      throw Error(ErrorCode::BadFormat, assignment_path + ": assignment must cover all 15 aspects");
    }
  }
  return s;
}

Eigen::VectorXd embedding_of(const EmbeddingTable& t, const SentenceIndex& index, const std::string& s) {
  return t.values.row(index.row(s)).transpose().cast<double>();
}

// Spearman(prediction_k, M_k) per aspect over metric-labelled pairs.
std::vector<std::optional<double>> aspect_correlations(const Scorer& scorer, const Batch& pairs) {
  const auto n = pairs.size();
  Eigen::MatrixXd pred(n, kAspectCount);
  for (Eigen::Index i = 0; i < n; ++i) {
    pred.row(i) = scorer.aspects(pairs.first.row(i).transpose(), pairs.second.row(i).transpose()).transpose();
  }
  std::vector<std::optional<double>> out;
  for (int k = 0; k < kAspectCount; ++k) {
    const Eigen::VectorXd p = pred.col(k);
    const Eigen::VectorXd m = pairs.targets.col(k);
    out.push_back(try_spearman({p.data(), static_cast<std::size_t>(n)}, {m.data(), static_cast<std::size_t>(n)}));
  }
  return out;
}

std::string required(const std::string& value, const std::string& flag) {
  if (value.empty()) throw CLI::RequiredError(flag);
  return value;
}

// ---- training flags shared by train and ablate ---------------------------

struct TrainFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string train_path, dev_path, embeddings_path;
  bool no_consistency = false;
  bool no_decomposition = false;
  std::optional<double> lr, alpha, consistency_weight;
  std::optional<int> warmup, epochs, batch, eval_every;
  std::optional<long> h;

  void add_to(CLI::App* app) {
    app->add_option("--config", config_path, "Flat key = value config file");
    app->add_option("--seed", seed, "Training seed (default: first configured seed)");
    app->add_option("--train", train_path, "Training pairs (JSONL)");
    app->add_option("--dev", dev_path, "Development pairs (JSONL)");
    app->add_option("--embeddings", embeddings_path, "Teacher embeddings (EMB1)");
    app->add_flag("--no-consistency", no_consistency, "Drop the consistency objective");
    app->add_flag("--no-decomposition", no_decomposition, "Drop the decomposition objective");
    app->add_option("--lr", lr, "Peak learning rate");
    app->add_option("--alpha", alpha, "Decomposition weight");
    app->add_option("--consistency-weight", consistency_weight, "Consistency weight");
    app->add_option("--warmup", warmup, "Linear warm-up steps");
    app->add_option("--epochs", epochs, "Training epochs");
    app->add_option("--batch", batch, "Batch size");
    app->add_option("--eval-every", eval_every, "Steps between dev evaluations");
    app->add_option("--sub-dim", h, "Sub-embedding size per aspect");
  }

  Config resolve() const {
    Config c = config_path.empty() ? default_config() : load_config(config_path);
    if (lr) c.lr = *lr;
    if (alpha) c.alpha = *alpha;
    if (consistency_weight) c.consistency_weight = *consistency_weight;
    if (warmup) c.warmup = *warmup;
    if (epochs) c.epochs = *epochs;
    if (batch) c.batch = *batch;
    if (eval_every) c.eval_every = *eval_every;
    if (h) c.h = *h;
    if (no_consistency) c.consistency_weight = 0.0;
    if (no_decomposition) c.alpha = 0.0;
    if (!train_path.empty()) c.train_data = train_path;
    if (!dev_path.empty()) c.dev_data = dev_path;
    if (!embeddings_path.empty()) c.embeddings = embeddings_path;
    return c;
  }

  std::uint64_t pick_seed(const Config& c) const { return seed ? *seed : c.seeds.front(); }
};

struct TrainingData {
  EmbeddingTable embeddings;
  Batch train;
  Batch dev;
  Model initial;
};

TrainingData load_training_data(const Config& c) {
  TrainingData t;
  t.embeddings = read_embeddings(c.resolve(required(c.embeddings, "--embeddings")));
  if (t.embeddings.dim() != c.d) {
    throw Error(ErrorCode::DimMismatch, "embedding dim " + std::to_string(t.embeddings.dim()) +
                                            " differs from configured d = " + std::to_string(c.d));
  }
  t.train = make_pair_batch(read_jsonl(c.resolve(required(c.train_data, "--train"))), t.embeddings);
  if (!c.dev_data.empty()) t.dev = make_pair_batch(read_jsonl(c.resolve(c.dev_data)), t.embeddings);
  t.initial = Model::identity(make_partition(c.d, c.h, kAspectCount));
  return t;
}

// ---- subcommands ---------------------------------------------------------

int run_amr(bool parse_mode, const std::string& path, bool indent, std::ostream& out, std::ostream& err) {
  const auto blocks = read_penman_file(path);
  int failures = 0;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const auto& b = blocks[i];
    try {
      const auto g = parse_penman(b.graph_text);
      for (const auto& w : g.warnings()) err << path << ":" << b.line << ": warning: " << w << '\n';
      if (parse_mode) {
        for (const auto& c : b.comments) out << c << '\n';
        out << serialize_penman(g, indent) << "\n\n";
      } else {
        out << i << "\tok\t" << g.variable_count() << '\n';
      }
    } catch (const Error& e) {
      if (parse_mode) throw Error(e.code(), path + ":" + std::to_string(b.line) + ": " + e.what());
      out << i << "\terror\t" << e.what() << '\n';
      ++failures;
    }
  }
  return failures == 0 ? 0 : 2;
}

int run_score(const std::string& metrics, const MetricFlags& flags, const std::string& path_a,
              const std::string& path_b, std::ostream& out) {
  std::vector<Aspect> selected;
  if (metrics == "all") {
    selected.assign(all_aspects().begin(), all_aspects().end());
  } else {
    std::stringstream ss(metrics);
    std::string name;
    while (std::getline(ss, name, ',')) {
      const auto a = parse_aspect(name);
      if (!a) throw Error(ErrorCode::UnsupportedAspect, "unknown metric '" + name + "'");
      selected.push_back(*a);
    }
  }
  const auto blocks_a = read_penman_file(path_a);
  const auto blocks_b = read_penman_file(path_b);
  if (blocks_a.size() != blocks_b.size()) {
    throw Error(ErrorCode::DimMismatch, "graph files hold " + std::to_string(blocks_a.size()) + " and " +
                                            std::to_string(blocks_b.size()) + " graphs");
  }
  if (blocks_a.empty()) throw Error(ErrorCode::EmptyInput, "no graphs to score");
  const auto vectors = load_optional_vectors(flags.word_vectors);
  std::vector<MetricVector> scores(blocks_a.size());
  parallel_for(blocks_a.size(), flags.jobs, [&](std::size_t i) {
    MetricConfig mc{flags.restarts, flags.seed, flags.wl_iterations, vectors.get()};
    scores[i] = metric_vector(parse_penman(blocks_a[i].graph_text), parse_penman(blocks_b[i].graph_text), mc);
  });
  for (Aspect a : selected) {
    out << aspect_name(a);
    for (const auto& s : scores) out << '\t' << fmt_score(s[static_cast<std::size_t>(aspect_index(a))]);
    out << '\n';
  }
  return 0;
}

int run_dataset_build(const std::string& pairs, const std::string& out_path, std::uint64_t seed,
                      std::size_t dev_n, std::size_t test_n, const MetricFlags& flags, std::ostream& out) {
  const auto vectors = load_optional_vectors(flags.word_vectors);
  BuildOptions opt;
  opt.seed = seed;
  opt.metrics = MetricConfig{flags.restarts, seed, flags.wl_iterations, vectors.get()};
  opt.jobs = flags.jobs;
  const auto records = build_pairs(read_source_pairs(pairs), opt);
  write_jsonl(records, out_path);
  out << "records\t" << records.size() << '\n';
  if (dev_n > 0 || test_n > 0) write_split(split(records, dev_n, test_n, seed), strip_jsonl(out_path), out);
  return 0;
}

int run_train(const TrainFlags& flags, const std::string& out_path, std::ostream& out) {
  const Config c = flags.resolve();
  const std::string ckpt = c.resolve(out_path.empty() ? required(c.checkpoint, "--out") : out_path);
  const auto data = load_training_data(c);
  const auto result = train(data.initial, data.train, data.dev, c.train_config(flags.pick_seed(c)));
  save_checkpoint(result.model, ckpt);
  out << "step\tdev_loss\tdev_decomposition\tdev_consistency\n";
  out << std::setprecision(10);
  for (const auto& p : result.history.evals) {
    out << p.step << '\t' << p.dev_loss << '\t' << p.dev_decomposition << '\t' << p.dev_consistency << '\n';
  }
  out << "# steps " << result.history.steps << ", best step " << result.history.best_step << '\n';
  return 0;
}

struct EvalFlags {
  std::string data, embeddings, model, assignment, pairs;
  std::string report = "overall";
  std::string search = "dev";
  double dev_fraction = 0.5;
  std::uint64_t seed = 0;
};

int run_eval(const std::string& kind, const EvalFlags& f, std::ostream& out) {
  const auto table = read_embeddings(required(f.embeddings, "--embeddings"));
  const SentenceIndex index(table);
  const Scorer scorer = make_scorer(f.model, f.assignment, table.dim());

  if (f.report == "aspects") {
    const auto batch = make_pair_batch(read_jsonl(required(f.pairs, "--pairs")), table);
    const auto rho = aspect_correlations(scorer, batch);
    out << "aspect,spearman\n";
    for (int k = 0; k < kAspectCount; ++k) {
      out << aspect_name(all_aspects()[static_cast<std::size_t>(k)]) << ',' << fmt_percent(rho[static_cast<std::size_t>(k)]) << '\n';
    }
    return 0;
  }

  const auto rows = read_pair_tsv(required(f.data, "--data"));
  std::vector<double> scores;
  for (const auto& r : rows) scores.push_back(scorer.overall(embedding_of(table, index, r.a), embedding_of(table, index, r.b)));

  if (kind == "ukpa") {
    std::vector<int> binary;
    std::vector<double> likert;
    std::vector<std::string> topics;
    for (const auto& r : rows) {
      const auto label = parse_ukpa_label(r.label);
      binary.push_back(binary_map(label));
      likert.push_back(likert3_map(label));
      topics.push_back(r.topic);
    }
    F1Report f1;
    if (f.search == "test") {
      f1 = threshold_search_f1(scores, binary);
    } else {
      const auto s = dev_split_per_topic(topics, f.dev_fraction, f.seed);
      f1 = threshold_search_f1(scores, binary, s.search, s.report);
    }
    out << "dataset,n,threshold,f1_macro,f1_sim,f1_not_sim,spearman\n";
    out << kind << ',' << rows.size() << ',' << fmt_score(f1.threshold) << ',' << fmt_percent(f1.macro) << ','
        << fmt_percent(f1.sim) << ',' << fmt_percent(f1.not_sim) << ',' << fmt_percent(try_spearman(scores, likert))
        << '\n';
    return 0;
  }

  const auto human = minmax_normalize(real_labels(rows));
  out << "dataset,n,spearman\n";
  out << kind << ',' << rows.size() << ',' << fmt_percent(try_spearman(scores, human)) << '\n';
  return 0;
}

int run_partition_rand(long d, long h, int k, std::uint64_t seed, const std::string& out_path, std::ostream& out) {
  const auto a = sb_rand_partition(d, h, k, seed);
  write_assignment_json(a, out_path);
  out << "assigned\t" << static_cast<long>(k) * h << "\tof\t" << d << '\n';
  return 0;
}

int run_partition_ilp(const std::string& pairs, const std::string& embeddings, const std::string& out_path,
                      std::ostream& out) {
  const auto table = read_embeddings(embeddings);
  const auto dev = make_pair_batch(read_jsonl(pairs), table);
  const auto omega = correlation_weights(dev);
  const auto a = ilp_partition(omega);
  write_assignment_json(a, out_path);
  long assigned = 0;
  for (int o : a.owners()) assigned += o >= 0 ? 1 : 0;
  out << "assigned\t" << assigned << "\tof\t" << a.dim() << "\nobjective\t"
      << fmt_score(assignment_objective(omega, a)) << '\n';
  return 0;
}

int run_analyze(const std::string& data, const std::string& embeddings, const std::string& model_path,
                const std::string& labels, std::ostream& out) {
  const auto table = read_embeddings(embeddings);
  const SentenceIndex index(table);
  const Model model = load_checkpoint(model_path);
  if (model.dim() != table.dim()) throw Error(ErrorCode::DimMismatch, "checkpoint and embeddings differ in dim");
  const auto rows = read_pair_tsv(data);
  std::vector<double> human;
  if (labels == "ukpa") {
    for (const auto& r : rows) human.push_back(likert3_map(parse_ukpa_label(r.label)));
  } else {
    human = minmax_normalize(real_labels(rows));
  }
  const auto n = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd features(n, kAspectCount + 1);
  std::vector<double> sim;
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& r = rows[static_cast<std::size_t>(i)];
    const auto e = embedding_of(table, index, r.a);
    const auto e2 = embedding_of(table, index, r.b);
    features.row(i).head(kAspectCount) = scaled_predictions(model, e, e2).transpose();
    features(i, kAspectCount) = model.partition.residual().size() > 0 ? residual_similarity(model, e, e2)
                                                                      : std::nan("");
    sim.push_back(model_similarity(model, e, e2));
  }
  std::vector<std::string> names;
  for (Aspect a : all_aspects()) names.emplace_back(aspect_name(a));
  names.emplace_back("Residual");
  out << feature_table_csv(feature_analysis(features, names, sim, human));
  return 0;
}

int run_ablate(const TrainFlags& flags, const std::string& test_path, std::ostream& out) {
  const Config c = flags.resolve();
  const auto data = load_training_data(c);
  const auto test = make_pair_batch(read_jsonl(c.resolve(required(test_path, "--test"))), data.embeddings);
  const auto n = static_cast<std::size_t>(data.train.size());
  // 50k and 300k of the full 1.5M, scaled to the available data
  const std::vector<std::size_t> sizes{0, static_cast<std::size_t>(std::llround(n * 50.0 / 1500.0)),
                                       static_cast<std::size_t>(std::llround(n * 300.0 / 1500.0)), n};
  const std::uint64_t seed = flags.pick_seed(c);
  Rng rng(mix_seed(seed, 0xab1a7e));
  const auto order = rng.permutation(n);

  std::vector<std::vector<std::optional<double>>> columns;
  for (std::size_t size : sizes) {
    Model model = data.initial;
    if (size > 0) model = train(data.initial, gather(data.train, order, 0, size), data.dev, c.train_config(seed)).model;
    Scorer scorer;
    scorer.model = model;
    columns.push_back(aspect_correlations(scorer, test));
  }
  out << "# AMR prediction performance w.r.t. different training data sizes\n";
  out << "aspect";
  for (std::size_t s : sizes) out << '\t' << s;
  out << '\n';
  std::vector<double> sums(sizes.size(), 0.0);
  std::vector<int> counts(sizes.size(), 0);
  for (int k = 0; k < kAspectCount; ++k) {
    out << aspect_name(all_aspects()[static_cast<std::size_t>(k)]);
    for (std::size_t j = 0; j < sizes.size(); ++j) {
      const auto v = columns[j][static_cast<std::size_t>(k)];
      out << '\t' << fmt_percent(v);
      if (v) {
        sums[j] += *v;
        ++counts[j];
      }
    }
    out << '\n';
  }
  out << "avg";
  for (std::size_t j = 0; j < sizes.size(); ++j) {
    out << '\t' << fmt_percent(counts[j] ? std::optional<double>(sums[j] / counts[j]) : std::nullopt);
  }
  out << '\n';
  return 0;
}

std::vector<char*> to_argv(std::vector<std::string>& storage) {
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());
  argv.push_back(nullptr);
  return argv;
}

}  // namespace

int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Structured sentence embeddings from AMR metrics", "structemb"};
  app.require_subcommand(1);
  app.fallthrough(false);

  // amr
  auto* amr = app.add_subcommand("amr", "Parse or validate PENMAN graph files");
  amr->require_subcommand(1);
  std::string amr_file;
  bool indent = false;
  auto* amr_parse = amr->add_subcommand("parse", "Print canonical PENMAN for every graph");
  amr_parse->add_option("file", amr_file, "PENMAN file")->required();
  amr_parse->add_flag("--indent", indent, "Indent nested nodes");
  auto* amr_check = amr->add_subcommand("check", "Report parse errors per graph");
  amr_check->add_option("file", amr_file, "PENMAN file")->required();

  // score
  auto* score = app.add_subcommand("score", "Score aligned graph pairs with AMR metrics");
  std::string metrics = "all";
  std::string score_a, score_b;
  MetricFlags score_flags;
  score->add_option("--metrics", metrics, "'all' or a comma list of metric names");
  score_flags.add_to(score, true);
  score->add_option("a", score_a, "First PENMAN file")->required();
  score->add_option("b", score_b, "Second PENMAN file (same graph count)")->required();

  // dataset
  auto* dataset = app.add_subcommand("dataset", "Build or split metric-labelled pair data");
  dataset->require_subcommand(1);
  std::string ds_pairs, ds_out, ds_in, ds_prefix;
  std::uint64_t ds_seed = 0;
  std::size_t ds_dev = 0, ds_test = 0;
  MetricFlags ds_flags;
  auto* ds_build = dataset->add_subcommand("build", "Positive and negative pairs with metric vectors");
  ds_build->add_option("--pairs", ds_pairs, "PENMAN file of consecutive similar pairs")->required();
  ds_build->add_option("--out", ds_out, "Output JSONL")->required();
  ds_build->add_option("--seed", ds_seed, "Random seed");
  ds_build->add_option("--dev", ds_dev, "Held-out positive dev pairs");
  ds_build->add_option("--test", ds_test, "Held-out positive test pairs");
  ds_flags.add_to(ds_build, false);
  auto* ds_split = dataset->add_subcommand("split", "Split JSONL records into train/dev/test");
  ds_split->add_option("--in", ds_in, "Input JSONL")->required();
  ds_split->add_option("--out-prefix", ds_prefix, "Prefix of the three output files");
  ds_split->add_option("--seed", ds_seed, "Random seed");
  ds_split->add_option("--dev", ds_dev, "Held-out positive dev pairs");
  ds_split->add_option("--test", ds_test, "Held-out positive test pairs");

  // train
  auto* train_cmd = app.add_subcommand("train", "Fit the structured projection head");
  TrainFlags train_flags;
  std::string train_out;
  train_flags.add_to(train_cmd);
  train_cmd->add_option("--out", train_out, "Checkpoint path");

  // eval
  auto* eval = app.add_subcommand("eval", "Evaluate similarities against human or metric labels");
  eval->require_subcommand(1);
  EvalFlags eval_flags;
  std::vector<CLI::App*> eval_kinds;
  for (const char* kind : {"sts", "sick", "ukpa"}) {
    auto* sub = eval->add_subcommand(kind, std::string("Evaluate on ") + kind + "-style data");
    sub->add_option("--data", eval_flags.data, "TSV: sentence_a, sentence_b, label[, topic]");
    sub->add_option("--embeddings", eval_flags.embeddings, "Teacher embeddings (EMB1)")->required();
    sub->add_option("--model", eval_flags.model, "Checkpoint; default is the raw teacher");
    sub->add_option("--assignment", eval_flags.assignment, "Dimension assignment JSON (baselines)");
    sub->add_option("--report", eval_flags.report, "overall or aspects")
        ->check(CLI::IsMember({"overall", "aspects"}));
    sub->add_option("--pairs", eval_flags.pairs, "Metric-labelled pairs for --report aspects");
    if (std::string(kind) == "ukpa") {
      sub->add_option("--search", eval_flags.search, "Threshold search split: dev or test")
          ->check(CLI::IsMember({"dev", "test"}));
      sub->add_option("--dev-fraction", eval_flags.dev_fraction, "Per-topic share used for the search")
          ->check(CLI::Range(0.0, 1.0));
      sub->add_option("--seed", eval_flags.seed, "Random seed for the dev split");
    }
    eval_kinds.push_back(sub);
  }

  // partition
  auto* partition = app.add_subcommand("partition", "Baseline dimension assignments");
  partition->require_subcommand(1);
  long p_d = 384, p_h = 16;
  int p_k = kAspectCount;
  std::uint64_t p_seed = 0;
  std::string p_out, p_pairs, p_embeddings;
  auto* p_rand = partition->add_subcommand("rand", "Random disjoint h-subsets");
  p_rand->add_option("--dim", p_d, "Embedding dim");
  p_rand->add_option("--sub-dim", p_h, "Dimensions per aspect");
  p_rand->add_option("--aspects", p_k, "Aspect count");
  p_rand->add_option("--seed", p_seed, "Random seed");
  p_rand->add_option("--out", p_out, "Output JSON")->required();
  auto* p_ilp = partition->add_subcommand("ilp", "Correlation-weighted exact assignment");
  p_ilp->add_option("--pairs", p_pairs, "Development pairs (JSONL)")->required();
  p_ilp->add_option("--embeddings", p_embeddings, "Teacher embeddings (EMB1)")->required();
  p_ilp->add_option("--out", p_out, "Output JSON")->required();

  // analyze
  auto* analyze = app.add_subcommand("analyze", "Feature analyses");
  analyze->require_subcommand(1);
  std::string an_data, an_embeddings, an_model, an_labels = "real";
  auto* an_features = analyze->add_subcommand("features", "Spearman of each sub-embedding vs SIM and HUM");
  an_features->add_option("--data", an_data, "TSV: sentence_a, sentence_b, label")->required();
  an_features->add_option("--embeddings", an_embeddings, "Teacher embeddings (EMB1)")->required();
  an_features->add_option("--model", an_model, "Checkpoint")->required();
  an_features->add_option("--labels", an_labels, "real (Likert scores) or ukpa (categories)")
      ->check(CLI::IsMember({"real", "ukpa"}));

  // ablate
  auto* ablate = app.add_subcommand("ablate", "Ablation harnesses");
  ablate->require_subcommand(1);
  TrainFlags ab_flags;
  std::string ab_test;
  auto* ab_size = ablate->add_subcommand("datasize", "Retrain on growing slices of the training data");
  ab_flags.add_to(ab_size);
  ab_size->add_option("--test", ab_test, "Metric-labelled test pairs (JSONL)");

  std::vector<std::string> storage{"structemb"};
  storage.insert(storage.end(), args.begin(), args.end());
  auto argv = to_argv(storage);

  try {
    app.parse(static_cast<int>(storage.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (amr_parse->parsed()) return run_amr(true, amr_file, indent, out, err);
    if (amr_check->parsed()) return run_amr(false, amr_file, indent, out, err);
    if (score->parsed()) return run_score(metrics, score_flags, score_a, score_b, out);
    if (ds_build->parsed()) return run_dataset_build(ds_pairs, ds_out, ds_seed, ds_dev, ds_test, ds_flags, out);
    if (ds_split->parsed()) {
      write_split(split(read_jsonl(ds_in), ds_dev, ds_test, ds_seed),
                  ds_prefix.empty() ? strip_jsonl(ds_in) : ds_prefix, out);
      return 0;
    }
    if (train_cmd->parsed()) return run_train(train_flags, train_out, out);
    for (auto* sub : eval_kinds) {
      if (sub->parsed()) return run_eval(sub->get_name(), eval_flags, out);
    }
    if (p_rand->parsed()) return run_partition_rand(p_d, p_h, p_k, p_seed, p_out, out);
    if (p_ilp->parsed()) return run_partition_ilp(p_pairs, p_embeddings, p_out, out);
    if (an_features->parsed()) return run_analyze(an_data, an_embeddings, an_model, an_labels, out);
    if (ab_size->parsed()) return run_ablate(ab_flags, ab_test, out);
  } catch (const CLI::RequiredError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  err << app.help();
  return 1;
}

}  // namespace structemb
