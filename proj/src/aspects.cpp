#include "structemb/aspects.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <regex>
#include <string>

#include "structemb/error.hpp"
#include "structemb/wl_kernel.hpp"

namespace structemb {

const std::array<Aspect, kAspectCount>& all_aspects() {
  static const std::array<Aspect, kAspectCount> kAll = {
      Aspect::Smatch,         Aspect::WLK,          Aspect::WWLK,        Aspect::Frames,
      Aspect::Unlabeled,      Aspect::NamedEntity,  Aspect::Negation,    Aspect::Concepts,
      Aspect::Coreference,    Aspect::SRL,          Aspect::MaxInDegreeSim,
      Aspect::MaxOutDegreeSim, Aspect::MaxDegreeSim, Aspect::RootSim,    Aspect::QuantSim};
  return kAll;
}

std::string_view aspect_name(Aspect a) {
  switch (a) {
    case Aspect::Smatch: return "Smatch";
    case Aspect::WLK: return "WLK";
    case Aspect::WWLK: return "WWLK";
    case Aspect::Frames: return "Frames";
    case Aspect::Unlabeled: return "Unlabeled";
    case Aspect::NamedEntity: return "NamedEntity";
    case Aspect::Negation: return "Negation";
    case Aspect::Concepts: return "Concepts";
    case Aspect::Coreference: return "Coreference";
    case Aspect::SRL: return "SRL";
    case Aspect::MaxInDegreeSim: return "maxIndegreeSim";
    case Aspect::MaxOutDegreeSim: return "maxOutDegreeSim";
    case Aspect::MaxDegreeSim: return "maxDegreeSim";
    case Aspect::RootSim: return "rootSim";
    case Aspect::QuantSim: return "quantSim";
  }
  return "?";
}

std::optional<Aspect> parse_aspect(std::string_view name) {
  auto lower = [](std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
  };
  const auto key = lower(name);
  for (Aspect a : all_aspects()) {
    if (lower(aspect_name(a)) == key) return a;
  }
  return std::nullopt;
}

bool is_projecting(Aspect a) {
  switch (a) {
    case Aspect::Frames:
    case Aspect::Unlabeled:
    case Aspect::NamedEntity:
    case Aspect::Negation:
    case Aspect::Concepts:
    case Aspect::Coreference:
    case Aspect::SRL:
      return true;
    default:
      return false;
  }
}

namespace {

bool is_frame(const std::string& concept_label) {
  static const std::regex kFrame(R"(^\S+-\d{2,}$)");
  return std::regex_match(concept_label, kFrame);
}

bool is_core_role(const std::string& label) {
  static const std::regex kArg(R"(^ARG\d+(-of)?$)");
  return std::regex_match(label, kArg);
}

// Triple lookups by variable.
struct TripleIndex {
  std::map<std::string, const Triple*> instance;
  std::map<std::string, std::vector<const Triple*>> outgoing;  // attributes + relations
  std::map<std::string, std::vector<const Triple*>> incoming;  // relations

  explicit TripleIndex(const TripleSet& triples) {
    for (const auto& t : triples) {
      if (t.kind == TripleKind::Instance) {
        instance[t.source] = &t;
        continue;
      }
      outgoing[t.source].push_back(&t);
      if (t.kind == TripleKind::Relation) incoming[t.target].push_back(&t);
    }
  }

  void add_instance(const std::string& var, TripleSet& out) const {
    auto it = instance.find(var);
    if (it != instance.end()) out.insert(*it->second);
  }
};

TripleSet named_entity_projection(const TripleSet& triples) {
  TripleIndex index(triples);
  TripleSet out;
  std::vector<std::string> stack;
  for (const auto& t : triples) {
    if (t.kind == TripleKind::Relation && t.label == "name") {
      out.insert(t);
      index.add_instance(t.source, out);
      stack.push_back(t.target);
    } else if (t.kind == TripleKind::Attribute && t.label == "wiki") {
      out.insert(t);
      index.add_instance(t.source, out);
    }
  }
  std::set<std::string> seen;
  while (!stack.empty()) {
    auto v = stack.back();
    stack.pop_back();
    if (!seen.insert(v).second) continue;
    index.add_instance(v, out);
    auto it = index.outgoing.find(v);
    if (it == index.outgoing.end()) continue;
    for (const Triple* t : it->second) {
      out.insert(*t);
      if (t->kind == TripleKind::Relation) stack.push_back(t->target);
    }
  }
  return out;
}

}  // namespace

TripleSet aspect_projection(Aspect aspect, const TripleSet& triples) {
  TripleSet out;
  switch (aspect) {
    case Aspect::Concepts:
      for (const auto& t : triples) {
        if (t.kind == TripleKind::Instance) out.insert(t);
      }
      return out;
    case Aspect::Frames:
      for (const auto& t : triples) {
        if (t.kind == TripleKind::Instance && is_frame(t.target)) out.insert(t);
      }
      return out;
    case Aspect::Negation: {
      TripleIndex index(triples);
      for (const auto& t : triples) {
        if (t.kind == TripleKind::Attribute && t.label == "polarity") {
          out.insert(t);
          index.add_instance(t.source, out);
        }
      }
      return out;
    }
    case Aspect::NamedEntity:
      return named_entity_projection(triples);
    case Aspect::Coreference: {
      TripleIndex index(triples);
      for (const auto& [var, in] : index.incoming) {
        if (in.size() < 2) continue;
        for (const Triple* t : in) out.insert(*t);
        index.add_instance(var, out);
      }
      return out;
    }
    case Aspect::SRL: {
      TripleIndex index(triples);
      for (const auto& t : triples) {
        if (t.kind == TripleKind::Relation && is_core_role(t.label)) {
          out.insert(t);
          index.add_instance(t.source, out);
          index.add_instance(t.target, out);
        }
      }
      return out;
    }
    case Aspect::Unlabeled:
      for (const auto& t : triples) {
        if (t.kind == TripleKind::Relation) {
          out.insert({t.kind, t.source, std::string(kWildcardLabel), t.target});
        }
      }
      return out;
    default:
      throw Error(ErrorCode::UnsupportedAspect,
                  std::string(aspect_name(aspect)) + " is not a projecting aspect");
  }
}

double aspect_score(Aspect aspect, const TripleSet& a, const TripleSet& b,
                    const Alignment& alignment) {
  const TripleSet pa = aspect_projection(aspect, a);
  const TripleSet pb = aspect_projection(aspect, b);
  if (pa.empty() && pb.empty()) return 1.0;
  if (pa.empty() || pb.empty()) return 0.0;
  return triple_f_score(count_matched_triples(pa, pb, alignment), pa.size(), pb.size());
}

double aspect_score(Aspect aspect, const AmrGraph& a, const AmrGraph& b, int restarts,
                    std::uint64_t seed) {
  if (!is_projecting(aspect)) {
    throw Error(ErrorCode::UnsupportedAspect,
                std::string(aspect_name(aspect)) + " is not a projecting aspect");
  }
  const auto result = smatch(a, b, restarts, seed);
  return aspect_score(aspect, extract_triples(a), extract_triples(b), result.alignment);
}

namespace {

std::map<std::string, int> quant_values(const AmrGraph& g) {
  std::map<std::string, int> out;
  for (const auto& e : g.edges()) {
    if (e.role != "quant") continue;
    out[e.is_relation() ? g.concept_of(e.target_text()) : e.target_text()] += 1;
  }
  return out;
}

}  // namespace

double quant_sim(const AmrGraph& a, const AmrGraph& b) {
  const auto qa = quant_values(a);
  const auto qb = quant_values(b);
  if (qa.empty() && qb.empty()) return 1.0;
  if (qa.empty() || qb.empty()) return 0.0;
  int overlap = 0;
  std::size_t na = 0, nb = 0;
  for (const auto& [v, c] : qa) {
    na += static_cast<std::size_t>(c);
    auto it = qb.find(v);
    if (it != qb.end()) overlap += std::min(c, it->second);
  }
  for (const auto& [v, c] : qb) nb += static_cast<std::size_t>(c);
  return triple_f_score(overlap, na, nb);
}

std::string focus_variable(const AmrGraph& g, DegreeVariant variant) {
  const auto degrees = node_degrees(g);
  const std::string* best = nullptr;
  int best_degree = -1;
  for (const auto& [var, d] : degrees) {
    const int value = variant == DegreeVariant::In ? d.in : variant == DegreeVariant::Out ? d.out : d.total();
    if (value > best_degree ||
        (value == best_degree && g.concept_of(var) < g.concept_of(*best))) {
      best = &var;
      best_degree = value;
    }
  }
  return *best;
}

double degree_focus_sim(DegreeVariant variant, const AmrGraph& a, const AmrGraph& b,
                        const WordVectorTable* vectors) {
  return label_similarity(vectors, a.concept_of(focus_variable(a, variant)),
                          b.concept_of(focus_variable(b, variant)));
}

double root_sim(const AmrGraph& a, const AmrGraph& b, const WordVectorTable* vectors) {
  return label_similarity(vectors, a.concept_of(a.root()), b.concept_of(b.root()));
}

MetricVector metric_vector(const AmrGraph& a, const AmrGraph& b, const MetricConfig& config) {
  MetricVector m{};
  const auto ta = extract_triples(a);
  const auto tb = extract_triples(b);
  const auto sm = smatch(a, b, config.restarts, config.seed);
  auto set = [&m](Aspect k, double v) { m[aspect_index(k)] = std::clamp(v, 0.0, 1.0); };

  set(Aspect::Smatch, sm.score);
  set(Aspect::WLK, wlk(a, b, config.wl_iterations));
  set(Aspect::WWLK, wwlk(a, b, config.wl_iterations, config.vectors));
  for (Aspect k : all_aspects()) {
    if (is_projecting(k)) set(k, aspect_score(k, ta, tb, sm.alignment));
  }
  set(Aspect::MaxInDegreeSim, degree_focus_sim(DegreeVariant::In, a, b, config.vectors));
  set(Aspect::MaxOutDegreeSim, degree_focus_sim(DegreeVariant::Out, a, b, config.vectors));
  set(Aspect::MaxDegreeSim, degree_focus_sim(DegreeVariant::Total, a, b, config.vectors));
  set(Aspect::RootSim, root_sim(a, b, config.vectors));
  set(Aspect::QuantSim, quant_sim(a, b));
  return m;
}

}  // namespace structemb
