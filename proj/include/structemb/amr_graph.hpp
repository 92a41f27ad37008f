#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <variant>
#include <vector>

namespace structemb {

// A constant leaf: string, number, or the polarity marker `-`.
struct Constant {
  std::string text;
  bool quoted = false;

  friend bool operator==(const Constant& a, const Constant& b) {
    return a.text == b.text;
  }
};

struct VariableRef {
  std::string name;
  friend bool operator==(const VariableRef&, const VariableRef&) = default;
};

using EdgeTarget = std::variant<VariableRef, Constant>;

struct Edge {
  std::string source;
  std::string role;  // without leading ':' and always in forward direction
  EdgeTarget target;

  bool is_relation() const { return std::holds_alternative<VariableRef>(target); }
  const std::string& target_text() const;
};

// Rooted, directed, labeled AMR graph. Immutable once built by parse_penman
// or AmrGraph::build.
class AmrGraph {
 public:
  AmrGraph() = default;

  // Validates the graph invariants (root declared, endpoints declared,
  // connected from the root) and throws Error on violation.
  static AmrGraph build(std::string root, std::map<std::string, std::string> concepts,
                        std::vector<Edge> edges);

  const std::string& root() const { return root_; }
  const std::map<std::string, std::string>& concepts() const { return concepts_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::string& concept_of(const std::string& var) const;
  bool has_variable(const std::string& var) const { return concepts_.count(var) != 0; }
  std::size_t variable_count() const { return concepts_.size(); }

  // Non-fatal observations made while parsing, e.g. directed cycles.
  const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  std::string root_;
  std::map<std::string, std::string> concepts_;
  std::vector<Edge> edges_;
  std::vector<std::string> warnings_;
};

enum class TripleKind { Instance, Attribute, Relation };

struct Triple {
  TripleKind kind;
  std::string source;
  std::string label;
  std::string target;

  auto tie() const { return std::tie(kind, source, label, target); }
  friend bool operator<(const Triple& a, const Triple& b) { return a.tie() < b.tie(); }
  friend bool operator==(const Triple& a, const Triple& b) { return a.tie() == b.tie(); }
};

// Ordered set, so iteration order is the canonical serialization order.
using TripleSet = std::set<Triple>;

inline constexpr std::string_view kInstanceLabel = "instance";
inline constexpr std::string_view kTopLabel = "top";

AmrGraph parse_penman(std::string_view text);

// Depth-first from the root, roles sorted lexicographically. With
// `indent` each nested node starts on its own line.
std::string serialize_penman(const AmrGraph& g, bool indent = false);

TripleSet extract_triples(const AmrGraph& g);

struct Degree {
  int in = 0;
  int out = 0;
  int total() const { return in + out; }
  friend bool operator==(const Degree&, const Degree&) = default;
};

std::map<std::string, Degree> node_degrees(const AmrGraph& g);

// One block of a PENMAN file: the `#` metadata lines plus the graph text.
struct PenmanBlock {
  std::vector<std::string> comments;  // full lines, including the leading '#'
  std::string graph_text;
  std::size_t line = 0;               // 1-based line where the block starts

  // Value of `# ::snt`, or empty.
  std::string sentence() const;
};

std::vector<PenmanBlock> split_penman_blocks(std::string_view text);
std::vector<PenmanBlock> read_penman_file(const std::string& path);

}  // namespace structemb
