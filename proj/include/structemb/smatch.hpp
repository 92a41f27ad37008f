#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "structemb/amr_graph.hpp"

namespace structemb {

// Partial injective map from variables of the first graph to variables of
// the second.
struct Alignment {
  std::map<std::string, std::string> mapping;

  bool is_injective() const;
};

struct SmatchResult {
  double score = 0.0;
  Alignment alignment;
  int matched = 0;
  std::size_t size_a = 0;
  std::size_t size_b = 0;
};

// Harmonic mean of precision matched/size_a and recall matched/size_b.
double triple_f_score(int matched, std::size_t size_a, std::size_t size_b);

// Number of triples of `a` whose image under `alignment` is in `b`.
// Instance and attribute triples need a mapped source; relation triples need
// both endpoints mapped.
int count_matched_triples(const TripleSet& a, const TripleSet& b, const Alignment& alignment);

// Greedy hill-climbing over variable alignments. Start 0 maps variables by
// concept agreement; starts 1..restarts-1 are random. Deterministic in seed.
SmatchResult smatch(const AmrGraph& a, const AmrGraph& b, int restarts = 4,
                    std::uint64_t seed = 0);

}  // namespace structemb
