#include "structemb/smatch.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "structemb/rng.hpp"

namespace structemb {

bool Alignment::is_injective() const {
  std::set<std::string> seen;
  for (const auto& [from, to] : mapping) {
    if (!seen.insert(to).second) return false;
  }
  return true;
}

double triple_f_score(int matched, std::size_t size_a, std::size_t size_b) {
  if (size_a + size_b == 0) return 0.0;
  return 2.0 * matched / static_cast<double>(size_a + size_b);
}

int count_matched_triples(const TripleSet& a, const TripleSet& b, const Alignment& alignment) {
  int matched = 0;
  for (const auto& t : a) {
    auto src = alignment.mapping.find(t.source);
    if (src == alignment.mapping.end()) continue;
    Triple image{t.kind, src->second, t.label, t.target};
    if (t.kind == TripleKind::Relation) {
      auto dst = alignment.mapping.find(t.target);
      if (dst == alignment.mapping.end()) continue;
      image.target = dst->second;
    }
    if (b.count(image) != 0) ++matched;
  }
  return matched;
}

namespace {

// Integer-encoded view of a graph pair for fast rescoring.
class AlignmentProblem {
 public:
  AlignmentProblem(const AmrGraph& a, const AmrGraph& b) {
    for (const auto& [v, c] : a.concepts()) vars_a_.push_back(v);
    for (const auto& [v, c] : b.concepts()) vars_b_.push_back(v);
    const auto ta = extract_triples(a);
    const auto tb = extract_triples(b);
    size_a_ = ta.size();
    size_b_ = tb.size();

    auto index_of = [](const std::vector<std::string>& vars, const std::string& v) {
      return static_cast<int>(std::lower_bound(vars.begin(), vars.end(), v) - vars.begin());
    };

    // unary_[i][j]: instance/attribute triples of a-var i matched when i -> j
    unary_.assign(vars_a_.size(), std::vector<int>(vars_b_.size(), 0));
    std::map<std::string, std::vector<std::pair<int, std::string>>> unary_b;
    for (const auto& t : tb) {
      if (t.kind == TripleKind::Relation) continue;
      unary_b[t.label + '\x1f' + t.target].push_back({index_of(vars_b_, t.source), t.label});
    }
    std::unordered_map<std::string, int> label_ids;
    auto label_id = [&](const std::string& l) {
      return label_ids.emplace(l, static_cast<int>(label_ids.size())).first->second;
    };
    for (const auto& t : ta) {
      if (t.kind == TripleKind::Relation) {
        relations_a_.push_back({index_of(vars_a_, t.source), label_id(t.label),
                                index_of(vars_a_, t.target)});
        continue;
      }
      auto it = unary_b.find(t.label + '\x1f' + t.target);
      if (it == unary_b.end()) continue;
      const int i = index_of(vars_a_, t.source);
      for (const auto& [j, label] : it->second) unary_[i][j] += 1;
    }
    for (const auto& t : tb) {
      if (t.kind != TripleKind::Relation) continue;
      auto it = label_ids.find(t.label);
      if (it == label_ids.end()) continue;
      const int j = index_of(vars_b_, t.source);
      const int m = index_of(vars_b_, t.target);
      relations_b_.insert(key(j, it->second, m));
      if (by_label_b_.size() <= static_cast<std::size_t>(it->second)) by_label_b_.resize(label_ids.size());
      by_label_b_[static_cast<std::size_t>(it->second)].push_back({j, m});
    }
  }

  int na() const { return static_cast<int>(vars_a_.size()); }
  int nb() const { return static_cast<int>(vars_b_.size()); }
  std::size_t size_a() const { return size_a_; }
  std::size_t size_b() const { return size_b_; }
  int unary(int i, int j) const { return unary_[i][j]; }
  int upper_bound() const { return static_cast<int>(std::min(size_a_, size_b_)); }

  int score(const std::vector<int>& map) const {
    int s = 0;
    for (int i = 0; i < na(); ++i) {
      if (map[i] >= 0) s += unary_[i][map[i]];
    }
    for (const auto& r : relations_a_) {
      const int j = map[r.source];
      const int l = map[r.target];
      if (j >= 0 && l >= 0 && relations_b_.count(key(j, r.label, l)) != 0) ++s;
    }
    return s;
  }

  // (source, target) variable pairs of the relations of b whose label also
  // occurs in a, indexed by label id.
  const std::vector<std::vector<std::pair<int, int>>>& relations_b_by_label() const { return by_label_b_; }
  struct RelationRef {
    int source;
    int label;
    int target;
  };
  const std::vector<RelationRef>& relations_a() const { return relations_a_; }

  Alignment to_alignment(const std::vector<int>& map) const {
    Alignment out;
    for (int i = 0; i < na(); ++i) {
      if (map[i] >= 0) out.mapping.emplace(vars_a_[i], vars_b_[map[i]]);
    }
    return out;
  }

 private:
  static std::uint64_t key(int s, int l, int t) {
    return (static_cast<std::uint64_t>(s) << 42) | (static_cast<std::uint64_t>(l) << 21) |
           static_cast<std::uint64_t>(t);
  }

  std::vector<std::string> vars_a_, vars_b_;
  std::size_t size_a_ = 0, size_b_ = 0;
  std::vector<std::vector<int>> unary_;
  std::vector<RelationRef> relations_a_;
  std::vector<std::vector<std::pair<int, int>>> by_label_b_;
  std::unordered_set<std::uint64_t> relations_b_;
};

std::vector<int> concept_greedy_start(const AlignmentProblem& p) {
  std::vector<int> map(p.na(), -1);
  std::vector<bool> used(p.nb(), false);
  for (int i = 0; i < p.na(); ++i) {
    int best = -1;
    for (int j = 0; j < p.nb(); ++j) {
      if (!used[j] && p.unary(i, j) > 0 && (best < 0 || p.unary(i, j) > p.unary(i, best))) best = j;
    }
    if (best >= 0) {
      map[i] = best;
      used[best] = true;
    }
  }
  int next = 0;
  for (int i = 0; i < p.na(); ++i) {
    if (map[i] >= 0) continue;
    while (next < p.nb() && used[next]) ++next;
    if (next == p.nb()) break;
    map[i] = next;
    used[next] = true;
  }
  return map;
}

std::vector<int> random_start(const AlignmentProblem& p, Rng& rng) {
  std::vector<int> map(p.na(), -1);
  auto order_a = rng.permutation(static_cast<std::size_t>(p.na()));
  auto order_b = rng.permutation(static_cast<std::size_t>(p.nb()));
  const std::size_t k = std::min(order_a.size(), order_b.size());
  for (std::size_t t = 0; t < k; ++t) map[order_a[t]] = static_cast<int>(order_b[t]);
  return map;
}

// Points a-variable i at b-variable j. Whoever held j takes i's old target,
// so the map stays injective.
void assign(std::vector<int>& map, std::vector<int>& holder, int i, int j) {
  const int old = map[i];
  if (old == j) return;
  const int x = holder[j];
  if (x >= 0) {
    map[x] = old;
    if (old >= 0) holder[old] = x;
  } else if (old >= 0) {
    holder[old] = -1;
  }
  map[i] = j;
  holder[j] = i;
}

// Steepest ascent. Moves: remap one variable (to a free target, or swapping
// with the variable holding it) and align both endpoints of a relation of a
// onto a same-label relation of b. The second move crosses plateaus where
// neither endpoint gains on its own.
int climb(const AlignmentProblem& p, std::vector<int>& map) {
  int current = p.score(map);
  std::vector<int> holder(p.nb(), -1);
  for (int i = 0; i < p.na(); ++i) {
    if (map[i] >= 0) holder[map[i]] = i;
  }
  std::vector<int> trial_map, trial_holder;
  while (current < p.upper_bound()) {
    int best_gain = 0;
    std::vector<int> best_map, best_holder;
    auto consider = [&](auto&& apply) {
      trial_map = map;
      trial_holder = holder;
      if (!apply()) return;
      const int gain = p.score(trial_map) - current;
      if (gain > best_gain) {
        best_gain = gain;
        best_map = trial_map;
        best_holder = trial_holder;
      }
    };
    for (int i = 0; i < p.na(); ++i) {
      for (int j = 0; j < p.nb(); ++j) {
        if (map[i] == j) continue;
        consider([&] {
          assign(trial_map, trial_holder, i, j);
          return true;
        });
      }
    }
    for (const auto& r : p.relations_a()) {
      if (static_cast<std::size_t>(r.label) >= p.relations_b_by_label().size()) continue;
      for (const auto& [j, m] : p.relations_b_by_label()[static_cast<std::size_t>(r.label)]) {
        if ((r.source == r.target) != (j == m)) continue;
        if (map[r.source] == j && map[r.target] == m) continue;
        consider([&] {
          assign(trial_map, trial_holder, r.source, j);
          assign(trial_map, trial_holder, r.target, m);
          return trial_map[r.source] == j;
        });
      }
    }
    if (best_gain <= 0) break;
    map = std::move(best_map);
    holder = std::move(best_holder);
    current += best_gain;
  }
  return current;
}

constexpr int kKicksPerStart = 8;

// Climb, then try a few random two-variable kicks from the local optimum,
// keeping any result that is at least as good. Plateau acceptance lets the
// search drift across equal-score alignments.
int climb_with_kicks(const AlignmentProblem& p, std::vector<int>& map, Rng& rng, int kicks) {
  int best = climb(p, map);
  if (p.na() == 0 || p.nb() == 0) return best;
  for (int t = 0; t < kicks && best < p.upper_bound(); ++t) {
    std::vector<int> trial = map;
    std::vector<int> holder(p.nb(), -1);
    for (int i = 0; i < p.na(); ++i) {
      if (trial[i] >= 0) holder[trial[i]] = i;
    }
    for (int r = 0; r < 2; ++r) {
      assign(trial, holder, static_cast<int>(rng.below(static_cast<std::uint64_t>(p.na()))),
             static_cast<int>(rng.below(static_cast<std::uint64_t>(p.nb()))));
    }
    const int s = climb(p, trial);
    if (s >= best) {
      best = s;
      map = std::move(trial);
    }
  }
  return best;
}

}  // namespace

SmatchResult smatch(const AmrGraph& a, const AmrGraph& b, int restarts, std::uint64_t seed) {
  AlignmentProblem problem(a, b);
  Rng rng(seed);
  std::vector<int> best_map;
  int best = -1;
  for (int r = 0; r < std::max(1, restarts); ++r) {
    auto map = r == 0 ? concept_greedy_start(problem) : random_start(problem, rng);
    const int s = climb_with_kicks(problem, map, rng, kKicksPerStart);
    if (s > best) {
      best = s;
      best_map = std::move(map);
    }
    if (best == problem.upper_bound()) break;
  }
  SmatchResult out;
  out.matched = best;
  out.size_a = problem.size_a();
  out.size_b = problem.size_b();
  out.score = triple_f_score(best, out.size_a, out.size_b);
  out.alignment = problem.to_alignment(best_map);
  return out;
}

}  // namespace structemb
