#include "structemb/config.hpp"

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "structemb/error.hpp"

namespace structemb {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string unquote(const std::string& s) {
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front()) {
    return s.substr(1, s.size() - 2);
  }
  return s;
}

template <typename T>
T parse_number(const std::string& text, const std::string& where) {
  T value{};
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) throw Error(ErrorCode::BadConfig, where + ": not a number: '" + text + "'");
  return value;
}

std::vector<std::uint64_t> parse_seeds(std::string text, const std::string& where) {
  if (!text.empty() && text.front() == '[') {
    if (text.back() != ']') throw Error(ErrorCode::BadConfig, where + ": unterminated list");
    text = text.substr(1, text.size() - 2);
  }
  std::vector<std::uint64_t> seeds;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) seeds.push_back(parse_number<std::uint64_t>(item, where));
  }
  if (seeds.empty()) throw Error(ErrorCode::BadConfig, where + ": seeds must not be empty");
  return seeds;
}

}  // namespace

TrainConfig Config::train_config(std::uint64_t seed) const {
  TrainConfig t;
  t.lr = lr;
  t.warmup = warmup;
  t.epochs = epochs;
  t.batch = batch;
  t.eval_every = eval_every;
  t.seed = seed;
  t.alpha = alpha;
  t.consistency_weight = consistency_weight;
  return t;
}

std::string Config::resolve(const std::string& path) const {
  if (path.empty() || data_root.empty() || std::filesystem::path(path).is_absolute()) return path;
  return (std::filesystem::path(data_root) / path).string();
}

void apply_config_text(Config& c, const std::string& text, const std::string& origin) {
  using Setter = std::function<void(const std::string&, const std::string&)>;
  auto integer = [](auto& field) {
    return Setter([&field](const std::string& v, const std::string& w) {
      field = parse_number<std::remove_reference_t<decltype(field)>>(v, w);
    });
  };
  auto real = [](double& field) {
    return Setter([&field](const std::string& v, const std::string& w) { field = parse_number<double>(v, w); });
  };
  auto text_field = [](std::string& field) {
    return Setter([&field](const std::string& v, const std::string&) { field = v; });
  };
  const std::map<std::string, Setter> setters{
      {"d", integer(c.d)},
      {"h", integer(c.h)},
      {"alpha", real(c.alpha)},
      {"consistency_weight", real(c.consistency_weight)},
      {"lr", real(c.lr)},
      {"warmup", integer(c.warmup)},
      {"epochs", integer(c.epochs)},
      {"batch", integer(c.batch)},
      {"eval_every", integer(c.eval_every)},
      {"seeds", Setter([&c](const std::string& v, const std::string& w) { c.seeds = parse_seeds(v, w); })},
      {"restarts", integer(c.restarts)},
      {"wl_iterations", integer(c.wl_iterations)},
      {"data_root", text_field(c.data_root)},
      {"word_vectors", text_field(c.word_vectors)},
      {"embeddings", text_field(c.embeddings)},
      {"train_data", text_field(c.train_data)},
      {"dev_data", text_field(c.dev_data)},
      {"test_data", text_field(c.test_data)},
      {"checkpoint", text_field(c.checkpoint)},
  };

  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string where = origin + ":" + std::to_string(line_no);
    // A '#' inside quotes is kept.
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') quoted = !quoted;
      if (line[i] == '#' && !quoted) {
        line.resize(i);
        break;
      }
    }
    line = trim(line);
    if (line.empty() || line.front() == '[') continue;  // blank or table header
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::BadConfig, where + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = unquote(trim(line.substr(eq + 1)));
    auto it = setters.find(key);
    if (it == setters.end()) throw Error(ErrorCode::BadConfig, where + ": unknown key '" + key + "'");
    it->second(value, where);
  }
  if (c.d <= 0 || c.h < 0 || c.batch <= 0 || c.epochs < 0 || c.warmup < 0 || c.eval_every <= 0 ||
      c.restarts < 1 || c.wl_iterations < 0 || !(c.lr > 0)) {
    throw Error(ErrorCode::BadConfig, origin + ": value out of range");
  }
}

Config default_config() {
  Config c;
  if (const char* root = std::getenv("S3_DATA_DIR")) c.data_root = root;
  return c;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Unreadable, "cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  Config c = default_config();
  apply_config_text(c, ss.str(), path);
  return c;
}

std::string config_to_text(const Config& c) {
  std::ostringstream out;
  out.precision(17);
  out << "d = " << c.d << "\nh = " << c.h << "\nalpha = " << c.alpha
      << "\nconsistency_weight = " << c.consistency_weight << "\nlr = " << c.lr
      << "\nwarmup = " << c.warmup << "\nepochs = " << c.epochs << "\nbatch = " << c.batch
      << "\neval_every = " << c.eval_every << "\nseeds = [";
  for (std::size_t i = 0; i < c.seeds.size(); ++i) out << (i ? ", " : "") << c.seeds[i];
  out << "]\nrestarts = " << c.restarts << "\nwl_iterations = " << c.wl_iterations << '\n';
  auto str = [&out](const char* key, const std::string& v) {
    if (!v.empty()) out << key << " = \"" << v << "\"\n";
  };
  str("data_root", c.data_root);
  str("word_vectors", c.word_vectors);
  str("embeddings", c.embeddings);
  str("train_data", c.train_data);
  str("dev_data", c.dev_data);
  str("test_data", c.test_data);
  str("checkpoint", c.checkpoint);
  return out.str();
}

}  // namespace structemb
