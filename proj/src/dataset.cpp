#include "structemb/dataset.hpp"

#include <fstream>

#include "json.hpp"

#include "structemb/error.hpp"
#include "structemb/parallel.hpp"
#include "structemb/rng.hpp"

namespace structemb {

using nlohmann::json;

std::vector<SourcePair> read_source_pairs(const std::string& path) {
  const auto blocks = read_penman_file(path);
  if (blocks.size() % 2 != 0) {
    throw Error(ErrorCode::BadFormat, path + ": odd number of graphs (" +
                                          std::to_string(blocks.size()) + "), expected pairs");
  }
  std::vector<SourcePair> out;
  for (std::size_t i = 0; i < blocks.size(); i += 2) {
    // fail early on unparsable graphs, with the block position
    for (std::size_t k = i; k < i + 2; ++k) {
      try {
        parse_penman(blocks[k].graph_text);
      } catch (const Error& e) {
        throw Error(e.code(), path + ":" + std::to_string(blocks[k].line) + ": " + e.what());
      }
    }
    out.push_back({blocks[i].sentence(), blocks[i + 1].sentence(), blocks[i].graph_text,
                   blocks[i + 1].graph_text});
  }
  return out;
}

std::vector<std::size_t> sample_negative_partners(std::size_t n, std::uint64_t seed) {
  if (n < 2) {
    throw Error(ErrorCode::InsufficientPairs, "negative sampling needs at least 2 input pairs");
  }
  Rng rng(seed);
  while (true) {
    auto p = rng.permutation(n);
    bool fixed_point = false;
    for (std::size_t i = 0; i < n && !fixed_point; ++i) fixed_point = p[i] == i;
    if (!fixed_point) return p;
  }
}

std::vector<PairRecord> build_pairs(const std::vector<SourcePair>& inputs,
                                    const BuildOptions& options) {
  const auto partners = sample_negative_partners(inputs.size(), options.seed);

  std::vector<PairRecord> records(2 * inputs.size());
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const auto& src = inputs[i];
    const auto& neg = inputs[partners[i]];
    records[2 * i] = {src.sentence_a, src.sentence_b, src.amr_a, src.amr_b, {}, Polarity::Positive};
    records[2 * i + 1] = {src.sentence_a, neg.sentence_a, src.amr_a, neg.amr_a, {},
                          Polarity::Negative};
  }

  // Per-record Smatch seeds keep results independent of scheduling.
  parallel_for(records.size(), options.jobs, [&](std::size_t r) {
    MetricConfig cfg = options.metrics;
    cfg.seed = mix_seed(options.seed, r);
    auto& rec = records[r];
    rec.metrics = metric_vector(parse_penman(rec.amr_a), parse_penman(rec.amr_b), cfg);
  });
  return records;
}

DataSplit split(const std::vector<PairRecord>& records, std::size_t dev_n, std::size_t test_n,
                std::uint64_t seed) {
  std::vector<std::size_t> positives;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (records[i].polarity == Polarity::Positive) positives.push_back(i);
  }
  if (dev_n + test_n > positives.size()) {
    throw Error(ErrorCode::InsufficientPositives,
                "need " + std::to_string(dev_n + test_n) + " positive records, have " +
                    std::to_string(positives.size()));
  }
  Rng rng(seed);
  rng.shuffle(positives);

  DataSplit out;
  std::vector<int> role(records.size(), 0);  // 0 train, 1 dev, 2 test
  for (std::size_t k = 0; k < dev_n; ++k) role[positives[k]] = 1;
  for (std::size_t k = dev_n; k < dev_n + test_n; ++k) role[positives[k]] = 2;
  for (std::size_t k = 0; k < dev_n; ++k) out.dev.push_back(records[positives[k]]);
  for (std::size_t k = dev_n; k < dev_n + test_n; ++k) out.test.push_back(records[positives[k]]);
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (role[i] == 0) out.train.push_back(records[i]);
  }
  return out;
}

std::string record_to_json(const PairRecord& r) {
  json j;
  j["sa"] = r.sentence_a;
  j["sb"] = r.sentence_b;
  j["amra"] = r.amr_a;
  j["amrb"] = r.amr_b;
  j["m"] = r.metrics;
  j["pol"] = r.polarity == Polarity::Positive ? "positive" : "negative";
  return j.dump();
}

PairRecord record_from_json(const std::string& line, std::size_t line_no) {
  auto fail = [line_no](const std::string& why) {
    return Error(ErrorCode::MalformedRecord, "line " + std::to_string(line_no) + ": " + why);
  };
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& e) {
    throw fail(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw fail("record is not an object");
  PairRecord r;
  auto text = [&](const char* key) {
    if (!j.contains(key)) throw fail(std::string("missing key '") + key + "'");
    if (!j[key].is_string()) throw fail(std::string("key '") + key + "' is not a string");
    return j[key].get<std::string>();
  };
  r.sentence_a = text("sa");
  r.sentence_b = text("sb");
  r.amr_a = text("amra");
  r.amr_b = text("amrb");
  if (!j.contains("m")) throw fail("missing key 'm'");
  const auto& m = j["m"];
  if (!m.is_array() || m.size() != static_cast<std::size_t>(kAspectCount)) {
    throw fail("'m' must be an array of " + std::to_string(kAspectCount) + " numbers");
  }
  for (int k = 0; k < kAspectCount; ++k) {
    if (!m[k].is_number()) throw fail("'m' entry " + std::to_string(k) + " is not a number");
    const double v = m[k].get<double>();
    if (!(v >= 0.0 && v <= 1.0)) throw fail("'m' entry " + std::to_string(k) + " outside [0,1]");
    r.metrics[k] = v;
  }
  const std::string pol = text("pol");
  if (pol == "positive") {
    r.polarity = Polarity::Positive;
  } else if (pol == "negative") {
    r.polarity = Polarity::Negative;
  } else {
    throw fail("unknown polarity '" + pol + "'");
  }
  return r;
}

void write_jsonl(const std::vector<PairRecord>& records, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Unreadable, "cannot write '" + path + "'");
  for (const auto& r : records) out << record_to_json(r) << '\n';
  if (!out) throw Error(ErrorCode::Unreadable, "write failed for '" + path + "'");
}

std::vector<PairRecord> read_jsonl(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Unreadable, "cannot open '" + path + "'");
  std::vector<PairRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(record_from_json(line, line_no));
    } catch (const Error& e) {
      throw Error(e.code(), path + ": " + e.what());
    }
  }
  return out;
}

}  // namespace structemb
