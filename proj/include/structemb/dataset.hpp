#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "structemb/aspects.hpp"

namespace structemb {

enum class Polarity { Positive, Negative };

struct PairRecord {
  std::string sentence_a;
  std::string sentence_b;
  std::string amr_a;
  std::string amr_b;
  MetricVector metrics{};
  Polarity polarity = Polarity::Positive;

  friend bool operator==(const PairRecord&, const PairRecord&) = default;
};

// A semantically similar sentence pair with its parses.
struct SourcePair {
  std::string sentence_a;
  std::string sentence_b;
  std::string amr_a;
  std::string amr_b;
};

// Consecutive blocks (0,1), (2,3), ... of a PENMAN file form the pairs;
// sentences come from `# ::snt`. Throws BadFormat on an odd block count.
std::vector<SourcePair> read_source_pairs(const std::string& path);

struct BuildOptions {
  std::uint64_t seed = 0;
  MetricConfig metrics;  // metrics.seed is replaced by a per-record seed
  int jobs = 1;
};

// For each input pair i emits a positive record (a_i, b_i) followed by a
// negative record (a_i, a_j) with j != i. The j's form a uniformly sampled
// derangement, so every a_j is used exactly once as a negative partner.
std::vector<PairRecord> build_pairs(const std::vector<SourcePair>& inputs,
                                    const BuildOptions& options);

// Partner index used for the negative of each input pair.
std::vector<std::size_t> sample_negative_partners(std::size_t n, std::uint64_t seed);

struct DataSplit {
  std::vector<PairRecord> train;
  std::vector<PairRecord> dev;
  std::vector<PairRecord> test;
};

// dev and test are drawn from the positive records only; train keeps the
// rest in input order.
DataSplit split(const std::vector<PairRecord>& records, std::size_t dev_n, std::size_t test_n,
                std::uint64_t seed);

// JSON Lines, keys: sa, sb, amra, amrb, m (15 numbers), pol ("positive" or
// "negative").
std::string record_to_json(const PairRecord& r);
PairRecord record_from_json(const std::string& line, std::size_t line_no);
void write_jsonl(const std::vector<PairRecord>& records, const std::string& path);
std::vector<PairRecord> read_jsonl(const std::string& path);

}  // namespace structemb
