#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

#include "structemb/amr_graph.hpp"
#include "structemb/lexical.hpp"
#include "structemb/smatch.hpp"

namespace structemb {

// The K = 15 AMR metrics, in the canonical order used for every
// MetricVector index (global metrics first, then the aspectual ones).
enum class Aspect {
  Smatch,
  WLK,
  WWLK,
  Frames,
  Unlabeled,
  NamedEntity,
  Negation,
  Concepts,
  Coreference,
  SRL,
  MaxInDegreeSim,
  MaxOutDegreeSim,
  MaxDegreeSim,
  RootSim,
  QuantSim,
};

inline constexpr int kAspectCount = 15;

using MetricVector = std::array<double, kAspectCount>;

const std::array<Aspect, kAspectCount>& all_aspects();
constexpr int aspect_index(Aspect a) { return static_cast<int>(a); }
std::string_view aspect_name(Aspect a);
// Case-insensitive; accepts the names returned by aspect_name.
std::optional<Aspect> parse_aspect(std::string_view name);

// Frames, Unlabeled, NamedEntity, Negation, Concepts, Coreference, SRL.
bool is_projecting(Aspect a);

inline constexpr std::string_view kWildcardLabel = "*";

// Aspect-filtered triple subset. Throws UnsupportedAspect for aspects that
// are not Smatch-derived.
TripleSet aspect_projection(Aspect aspect, const TripleSet& triples);

// Smatch F over projected triples under a given whole-graph alignment.
// Both projections empty gives 1; exactly one empty gives 0.
double aspect_score(Aspect aspect, const TripleSet& a, const TripleSet& b,
                    const Alignment& alignment);
double aspect_score(Aspect aspect, const AmrGraph& a, const AmrGraph& b, int restarts = 4,
                    std::uint64_t seed = 0);

// Multiset F over `:quant` values; 1 when neither graph quantifies.
double quant_sim(const AmrGraph& a, const AmrGraph& b);

enum class DegreeVariant { In, Out, Total };

// Variable with the largest degree; ties go to the smallest concept label,
// then the smallest variable name.
std::string focus_variable(const AmrGraph& g, DegreeVariant variant);

// Label similarity of the focus concepts. Not clamped.
double degree_focus_sim(DegreeVariant variant, const AmrGraph& a, const AmrGraph& b,
                        const WordVectorTable* vectors);
double root_sim(const AmrGraph& a, const AmrGraph& b, const WordVectorTable* vectors);

struct MetricConfig {
  int restarts = 4;
  std::uint64_t seed = 0;
  int wl_iterations = 2;
  const WordVectorTable* vectors = nullptr;
};

// All 15 scores in canonical order, each in [0, 1].
MetricVector metric_vector(const AmrGraph& a, const AmrGraph& b, const MetricConfig& config = {});

}  // namespace structemb
