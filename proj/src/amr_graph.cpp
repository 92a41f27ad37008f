#include "structemb/amr_graph.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <sstream>

#include "structemb/error.hpp"

namespace structemb {

const std::string& Edge::target_text() const {
  if (const auto* v = std::get_if<VariableRef>(&target)) return v->name;
  return std::get<Constant>(target).text;
}

const std::string& AmrGraph::concept_of(const std::string& var) const {
  auto it = concepts_.find(var);
  if (it == concepts_.end()) {
    throw Error(ErrorCode::UndeclaredVariable, "no variable '" + var + "'");
  }
  return it->second;
}

namespace {

bool has_directed_cycle(const std::map<std::string, std::string>& concepts,
                        const std::vector<Edge>& edges) {
  std::map<std::string, std::vector<std::string>> out;
  for (const auto& e : edges) {
    if (e.is_relation()) out[e.source].push_back(e.target_text());
  }
  // 0 = unvisited, 1 = on stack, 2 = done
  std::map<std::string, int> state;
  std::function<bool(const std::string&)> visit = [&](const std::string& v) {
    state[v] = 1;
    for (const auto& w : out[v]) {
      if (state[w] == 1) return true;
      if (state[w] == 0 && visit(w)) return true;
    }
    state[v] = 2;
    return false;
  };
  for (const auto& [v, c] : concepts) {
    if (state[v] == 0 && visit(v)) return true;
  }
  return false;
}

}  // namespace

AmrGraph AmrGraph::build(std::string root, std::map<std::string, std::string> concepts,
                         std::vector<Edge> edges) {
  if (concepts.count(root) == 0) {
    throw Error(ErrorCode::UndeclaredVariable, "root '" + root + "' is not declared");
  }
  std::map<std::string, std::vector<std::string>> adjacent;
  for (const auto& e : edges) {
    if (concepts.count(e.source) == 0) {
      throw Error(ErrorCode::UndeclaredVariable, "edge source '" + e.source + "'");
    }
    if (e.is_relation()) {
      const auto& t = e.target_text();
      if (concepts.count(t) == 0) {
        throw Error(ErrorCode::UndeclaredVariable, "edge target '" + t + "'");
      }
      adjacent[e.source].push_back(t);
      adjacent[t].push_back(e.source);
    }
  }
  std::set<std::string> seen{root};
  std::vector<std::string> stack{root};
  while (!stack.empty()) {
    auto v = stack.back();
    stack.pop_back();
    for (const auto& w : adjacent[v]) {
      if (seen.insert(w).second) stack.push_back(w);
    }
  }
  if (seen.size() != concepts.size()) {
    throw Error(ErrorCode::UndeclaredVariable, "graph is not connected from root '" + root + "'");
  }

  AmrGraph g;
  g.root_ = std::move(root);
  g.concepts_ = std::move(concepts);
  g.edges_ = std::move(edges);
  if (has_directed_cycle(g.concepts_, g.edges_)) {
    g.warnings_.push_back("graph contains a directed cycle");
  }
  return g;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

enum class Tok { LParen, RParen, Slash, Role, String, Symbol, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t offset;
};

bool is_delimiter(char c) {
  return std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == '"';
}

// `~e.12` / `~e.3,4` / `~12` alignment markers.
std::string strip_alignment(std::string s) {
  auto pos = s.rfind('~');
  if (pos == std::string::npos || pos == 0) return s;
  auto tail = s.substr(pos + 1);
  if (!tail.empty() &&
      std::all_of(tail.begin(), tail.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == ',';
      }) &&
      std::any_of(tail.begin(), tail.end(),
                  [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
    s.erase(pos);
  }
  return s;
}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '(') {
      out.push_back({Tok::LParen, "(", i++});
    } else if (c == ')') {
      out.push_back({Tok::RParen, ")", i++});
    } else if (c == '/') {
      out.push_back({Tok::Slash, "/", i++});
    } else if (c == '"') {
      std::size_t start = i++;
      std::string value;
      bool closed = false;
      while (i < text.size()) {
        if (text[i] == '\\' && i + 1 < text.size()) {
          value += text[i + 1];
          i += 2;
        } else if (text[i] == '"') {
          ++i;
          closed = true;
          break;
        } else {
          value += text[i++];
        }
      }
      if (!closed) {
        throw Error(ErrorCode::UnbalancedParens,
                    "unterminated string at offset " + std::to_string(start));
      }
      // alignment suffix directly after the closing quote
      if (i < text.size() && text[i] == '~') {
        while (i < text.size() && !is_delimiter(text[i])) ++i;
      }
      out.push_back({Tok::String, value, start});
    } else {
      std::size_t start = i;
      while (i < text.size() && !is_delimiter(text[i]) && text[i] != '/') ++i;
      std::string word = strip_alignment(std::string(text.substr(start, i - start)));
      if (word.front() == ':') {
        if (word.size() == 1) {
          throw Error(ErrorCode::UnexpectedToken, "empty role at offset " + std::to_string(start));
        }
        out.push_back({Tok::Role, word.substr(1), start});
      } else {
        out.push_back({Tok::Symbol, word, start});
      }
    }
  }
  out.push_back({Tok::End, "", text.size()});
  return out;
}

bool looks_like_variable(const std::string& s) {
  if (s.empty() || !std::islower(static_cast<unsigned char>(s[0]))) return false;
  return std::all_of(s.begin() + 1, s.end(),
                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

bool is_inverse_role(const std::string& role) {
  static const std::set<std::string> kNotInverted = {"consist-of", "prep-out-of",
                                                     "prep-on-behalf-of"};
  return role.size() > 3 && role.compare(role.size() - 3, 3, "-of") == 0 &&
         kNotInverted.count(role) == 0;
}

struct RawEdge {
  std::string source;
  std::string role;
  std::string value;
  bool is_string;   // quoted literal
  bool is_node;     // value is a nested node's variable
};

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  AmrGraph run() {
    if (peek().kind == Tok::End) throw Error(ErrorCode::EmptyInput, "no graph");
    std::string root = node();
    if (peek().kind != Tok::End) {
      if (peek().kind == Tok::RParen) {
        throw Error(ErrorCode::UnbalancedParens,
                    "unexpected ')' at offset " + std::to_string(peek().offset));
      }
      throw Error(ErrorCode::UnexpectedToken,
                  "trailing content at offset " + std::to_string(peek().offset));
    }

    std::vector<Edge> edges;
    for (auto& r : raw_) {
      EdgeTarget target;
      bool is_var = r.is_node || (!r.is_string && concepts_.count(r.value) != 0);
      if (!is_var && !r.is_string && looks_like_variable(r.value)) {
        throw Error(ErrorCode::UndeclaredVariable, "variable '" + r.value + "' is never declared");
      }
      if (is_var && is_inverse_role(r.role)) {
        edges.push_back({r.value, r.role.substr(0, r.role.size() - 3), VariableRef{r.source}});
      } else if (is_var) {
        edges.push_back({r.source, r.role, VariableRef{r.value}});
      } else {
        edges.push_back({r.source, r.role, Constant{r.value, r.is_string}});
      }
    }
    return AmrGraph::build(std::move(root), std::move(concepts_), std::move(edges));
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& take() { return tokens_[pos_ == tokens_.size() - 1 ? pos_ : pos_++]; }

  const Token& expect(Tok kind, const char* what) {
    const Token& t = peek();
    if (t.kind == Tok::End) {
      throw Error(ErrorCode::UnbalancedParens, std::string("input ended while expecting ") + what);
    }
    if (t.kind != kind) {
      throw Error(ErrorCode::UnexpectedToken, std::string("expected ") + what + " at offset " +
                                                  std::to_string(t.offset) + ", found '" +
                                                  t.text + "'");
    }
    return take();
  }

  std::string node() {
    expect(Tok::LParen, "'('");
    std::string var = expect(Tok::Symbol, "variable").text;
    expect(Tok::Slash, "'/'");
    const Token& c = peek();
    if (c.kind != Tok::Symbol && c.kind != Tok::String) expect(Tok::Symbol, "concept");
    std::string concept_label = take().text;
    if (!concepts_.emplace(var, concept_label).second) {
      throw Error(ErrorCode::DuplicateVariable, "variable '" + var + "' declared twice");
    }
    while (peek().kind == Tok::Role) {
      std::string role = take().text;
      const Token& v = peek();
      if (v.kind == Tok::LParen) {
        std::string child = node();
        raw_.push_back({var, role, child, false, true});
      } else if (v.kind == Tok::Symbol || v.kind == Tok::String) {
        raw_.push_back({var, role, v.text, v.kind == Tok::String, false});
        take();
      } else if (v.kind == Tok::End) {
        throw Error(ErrorCode::UnbalancedParens, "input ended after role ':" + role + "'");
      } else {
        throw Error(ErrorCode::UnexpectedToken,
                    "role ':" + role + "' has no value at offset " + std::to_string(v.offset));
      }
    }
    expect(Tok::RParen, "')'");
    return var;
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::map<std::string, std::string> concepts_;
  std::vector<RawEdge> raw_;
};

}  // namespace

AmrGraph parse_penman(std::string_view text) {
  return Parser(tokenize(text)).run();
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

std::string render_constant(const Constant& c) {
  bool needs_quotes = c.quoted || c.text.empty() ||
                      std::any_of(c.text.begin(), c.text.end(), [](char ch) {
                        return is_delimiter(ch) || ch == ':' || ch == '/' || ch == '~';
                      });
  if (!needs_quotes) return c.text;
  std::string out = "\"";
  for (char ch : c.text) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  return out + "\"";
}

std::string render_concept(const std::string& c) {
  bool plain = !c.empty() && std::none_of(c.begin(), c.end(), [](char ch) {
    return is_delimiter(ch) || ch == ':' || ch == '/';
  });
  return plain ? c : render_constant(Constant{c, true});
}

class Serializer {
 public:
  Serializer(const AmrGraph& g, bool indent) : g_(g), indent_(indent), emitted_(g.edges().size()) {
    for (std::size_t i = 0; i < g.edges().size(); ++i) {
      const auto& e = g.edges()[i];
      incident_[e.source].push_back(i);
      if (e.is_relation() && e.target_text() != e.source) incident_[e.target_text()].push_back(i);
    }
  }

  std::string run() {
    assign_owners();
    write_node(g_.root(), 0);
    return out_.str();
  }

 private:
  struct Item {
    std::string role;
    std::string target;
    std::size_t edge;
    bool operator<(const Item& o) const { return std::tie(role, target, edge) < std::tie(o.role, o.target, o.edge); }
  };

  // Each variable is expanded under exactly one edge. Forward edges win;
  // an inverse edge owns a variable only when no forward path reaches it.
  void assign_owners() {
    std::vector<std::string> order;
    std::set<std::string> seen;
    std::function<void(const std::string&)> forward = [&](const std::string& v) {
      seen.insert(v);
      order.push_back(v);
      std::vector<Item> out;
      for (std::size_t idx : incident_[v]) {
        const auto& e = g_.edges()[idx];
        if (e.source == v && e.is_relation()) out.push_back({e.role, e.target_text(), idx});
      }
      std::sort(out.begin(), out.end());
      for (const auto& it : out) {
        if (seen.count(it.target)) continue;
        owner_[it.target] = it.edge;
        forward(it.target);
      }
    };
    forward(g_.root());
    while (seen.size() < g_.variable_count()) {
      bool grew = false;
      for (std::size_t i = 0; i < order.size() && !grew; ++i) {
        std::vector<Item> in;
        for (std::size_t idx : incident_[order[i]]) {
          const auto& e = g_.edges()[idx];
          if (e.source != order[i] && !seen.count(e.source)) in.push_back({e.role, e.source, idx});
        }
        if (in.empty()) continue;
        const auto first = *std::min_element(in.begin(), in.end());
        owner_[first.target] = first.edge;
        forward(first.target);
        grew = true;
      }
      if (!grew) break;  // unreachable for connected graphs
    }
  }

  void write_node(const std::string& var, int depth) {
    visited_.insert(var);
    out_ << '(' << var << " / " << render_concept(g_.concept_of(var));

    std::vector<Item> items;
    for (std::size_t idx : incident_[var]) {
      if (emitted_[idx]) continue;
      const auto& e = g_.edges()[idx];
      if (e.source == var) {
        std::string t = e.is_relation() ? e.target_text() : render_constant(std::get<Constant>(e.target));
        items.push_back({e.role, t, idx});
      } else if (auto o = owner_.find(e.source); o != owner_.end() && o->second == idx) {
        // other incoming edges are written at their source
        items.push_back({e.role + "-of", e.source, idx});
      }
    }
    std::sort(items.begin(), items.end());

    for (const auto& item : items) {
      // a descendant may have emitted it meanwhile
      if (emitted_[item.edge]) continue;
      emitted_[item.edge] = true;
      const auto& e = g_.edges()[item.edge];
      if (indent_) {
        out_ << '\n' << std::string(static_cast<std::size_t>(depth + 1) * 4, ' ');
      } else {
        out_ << ' ';
      }
      out_ << ':' << item.role << ' ';
      bool var_target = e.source != var || e.is_relation();
      auto owner = owner_.find(item.target);
      if (var_target && visited_.count(item.target) == 0 && owner != owner_.end() &&
          owner->second == item.edge) {
        write_node(item.target, depth + 1);
      } else {
        out_ << item.target;
      }
    }
    out_ << ')';
  }

  const AmrGraph& g_;
  bool indent_;
  std::vector<bool> emitted_;
  std::map<std::string, std::vector<std::size_t>> incident_;
  std::set<std::string> visited_;
  std::map<std::string, std::size_t> owner_;
  std::ostringstream out_;
};

}  // namespace

std::string serialize_penman(const AmrGraph& g, bool indent) {
  return Serializer(g, indent).run();
}

// ---------------------------------------------------------------------------

TripleSet extract_triples(const AmrGraph& g) {
  TripleSet out;
  for (const auto& [var, c] : g.concepts()) {
    out.insert({TripleKind::Instance, var, std::string(kInstanceLabel), c});
  }
  for (const auto& e : g.edges()) {
    out.insert({e.is_relation() ? TripleKind::Relation : TripleKind::Attribute, e.source, e.role,
                e.target_text()});
  }
  out.insert({TripleKind::Attribute, g.root(), std::string(kTopLabel), g.concept_of(g.root())});
  return out;
}

std::map<std::string, Degree> node_degrees(const AmrGraph& g) {
  std::map<std::string, Degree> out;
  for (const auto& [var, c] : g.concepts()) out[var];
  for (const auto& e : g.edges()) {
    out[e.source].out += 1;
    if (e.is_relation()) out[e.target_text()].in += 1;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Files

std::string PenmanBlock::sentence() const {
  static const std::string kKey = "::snt";
  for (const auto& line : comments) {
    auto pos = line.find(kKey);
    if (pos == std::string::npos) continue;
    pos += kKey.size();
    if (pos < line.size() && line[pos] != ' ' && line[pos] != '\t') continue;
    auto end = line.find(" ::", pos);
    std::string value = line.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
    auto first = value.find_first_not_of(" \t");
    auto last = value.find_last_not_of(" \t\r");
    return first == std::string::npos ? std::string() : value.substr(first, last - first + 1);
  }
  return {};
}

std::vector<PenmanBlock> split_penman_blocks(std::string_view text) {
  std::vector<PenmanBlock> blocks;
  PenmanBlock current;
  bool open = false;
  std::size_t line_no = 0;
  auto flush = [&] {
    if (open && !current.graph_text.empty()) blocks.push_back(std::move(current));
    current = PenmanBlock{};
    open = false;
  };

  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string line(text.substr(start, end - start));
    if (!line.empty() && line.back() == '\r') line.pop_back();
    ++line_no;
    auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos) {
      flush();
    } else {
      if (!open) {
        current.line = line_no;
        open = true;
      }
      if (line[first] == '#') {
        current.comments.push_back(line.substr(first));
      } else {
        if (!current.graph_text.empty()) current.graph_text += '\n';
        current.graph_text += line;
      }
    }
    if (end == text.size()) break;
    start = end + 1;
  }
  flush();
  return blocks;
}

std::vector<PenmanBlock> read_penman_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Unreadable, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return split_penman_blocks(buf.str());
}

}  // namespace structemb
