#include "fixtures.hpp"

#include <algorithm>
#include <atomic>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <unistd.h>

#include <Eigen/LU>
#include <Eigen/QR>

namespace fixture {

using namespace structemb;

AmrGraph random_graph(Rng& rng, const GraphOptions& opt) {
  static const std::vector<std::string> concepts{"dog", "want-01", "cat", "go-02", "big", "person", "eat-01", "city"};
  static const std::vector<std::string> roles{"ARG0", "ARG1", "mod", "ARG2", "location"};
  static const std::vector<std::string> constants{"-", "2", "\"Paris\"", "5"};
  static const std::vector<std::string> attr_roles{"polarity", "quant", "name", "mode"};

  const int n = opt.min_vars + static_cast<int>(rng.below(static_cast<std::uint64_t>(opt.max_vars - opt.min_vars + 1)));
  const auto pool = static_cast<std::uint64_t>(std::min<std::size_t>(static_cast<std::size_t>(opt.concept_pool), concepts.size()));
  std::map<std::string, std::string> var_concepts;
  std::vector<std::string> vars;
  for (int i = 0; i < n; ++i) {
    vars.push_back("v" + std::to_string(i));
    var_concepts[vars.back()] = concepts[rng.below(pool)];
  }
  std::vector<Edge> edges;
  auto role = [&] { return roles[rng.below(roles.size())]; };
  for (int i = 1; i < n; ++i) {
    const auto& parent = vars[rng.below(static_cast<std::uint64_t>(i))];
    if (rng.uniform() < opt.inverse) {
      edges.push_back({vars[i], role(), VariableRef{parent}});
    } else {
      edges.push_back({parent, role(), VariableRef{vars[i]}});
    }
  }
  if (n > 1 && rng.uniform() < opt.reentrancy) {
    const auto& s = vars[rng.below(vars.size())];
    const auto& t = vars[rng.below(vars.size())];
    Edge extra{s, role(), VariableRef{t}};
    const bool duplicate = std::any_of(edges.begin(), edges.end(), [&](const Edge& e) {
      return e.source == extra.source && e.role == extra.role && e.target == extra.target;
    });
    if (s != t && !duplicate) edges.push_back(std::move(extra));
  }
  for (const auto& v : vars) {
    if (rng.uniform() < opt.attribute) {
      const auto& c = constants[rng.below(constants.size())];
      const bool quoted = c.front() == '"';
      edges.push_back({v, attr_roles[rng.below(attr_roles.size())],
                       Constant{quoted ? c.substr(1, c.size() - 2) : c, quoted}});
    }
  }
  return AmrGraph::build(vars.front(), std::move(var_concepts), std::move(edges));
}

namespace {

void put_u32(std::ostream& out, std::uint32_t v) {
  const unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                              static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

}  // namespace

void write_emb1(const std::string& path, const std::vector<std::vector<float>>& rows,
                const std::vector<std::string>& sentences) {
  std::ofstream out(path, std::ios::binary);
  out.write("EMB1", 4);
  put_u32(out, static_cast<std::uint32_t>(rows.size()));
  put_u32(out, rows.empty() ? 0u : static_cast<std::uint32_t>(rows.front().size()));
  for (const auto& row : rows) {
    for (float f : row) {
      std::uint32_t bits;
      std::memcpy(&bits, &f, 4);
      put_u32(out, bits);
    }
  }
  std::ofstream side(path + ".txt");
  for (const auto& s : sentences) side << s << '\n';
}

GradientInstance random_gradient_instance(Rng& rng, int d, int k, int h, int b) {
  GradientInstance g;
  g.model = Model::identity(make_partition(d, h, k));
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) g.model.weights(i, j) += 0.3 * rng.normal();
  }
  for (int j = 0; j < k; ++j) g.model.betas(j) = 0.5 + rng.uniform();
  g.batch.first.resize(b, d);
  g.batch.second.resize(b, d);
  g.batch.targets.resize(b, k);
  for (int i = 0; i < b; ++i) {
    for (int j = 0; j < d; ++j) {
      g.batch.first(i, j) = rng.normal();
      g.batch.second(i, j) = rng.normal();
    }
    for (int j = 0; j < k; ++j) g.batch.targets(i, j) = rng.uniform();
  }
  return g;
}

namespace {

Eigen::VectorXd unit_gaussian(Rng& rng, long n) {
  Eigen::VectorXd v(n);
  for (long i = 0; i < n; ++i) v(i) = rng.normal();
  return v.normalized();
}

// Pair of unit vectors with cosine exactly rho.
void correlated_pair(Rng& rng, long n, double rho, Eigen::VectorXd& a, Eigen::VectorXd& b) {
  a = unit_gaussian(rng, n);
  Eigen::VectorXd noise = unit_gaussian(rng, n);
  noise = (noise - noise.dot(a) * a).normalized();
  b = rho * a + std::sqrt(1.0 - rho * rho) * noise;
}

Batch desk_batch(Rng& rng, int n, const Eigen::MatrixXd& q, const Eigen::VectorXd& shared, long d, long h, int k) {
  Batch out;
  out.first.resize(n, d);
  out.second.resize(n, d);
  out.targets.resize(n, k);
  const long residual = d - static_cast<long>(k) * h;
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd x(d), y(d);
    Eigen::VectorXd a, b;
    for (int j = 0; j < k; ++j) {
      const double rho = rng.uniform();
      correlated_pair(rng, h, rho, a, b);
      x.segment(j * h, h) = a;
      y.segment(j * h, h) = b;
      out.targets(i, j) = rho;
    }
    if (residual > 0) {
      correlated_pair(rng, residual, rng.uniform(), a, b);
      x.tail(residual) = a;
      y.tail(residual) = b;
    }
    out.first.row(i) = (q * x + shared).transpose();
    out.second.row(i) = (q * y + shared).transpose();
  }
  return out;
}

}  // namespace

DeskFixture desk_fixture(std::uint64_t seed, double mixing, double anisotropy, int n_train, int n_dev, int n_test, long d, long h, int k) {
  Rng rng(seed);
  Eigen::MatrixXd g(d, d);
  for (long i = 0; i < d; ++i) {
    for (long j = 0; j < d; ++j) g(i, j) = rng.normal();
  }
  DeskFixture f;
  if (mixing >= 1.0) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    f.rotation = qr.householderQ() * Eigen::MatrixXd::Identity(d, d);
  } else {
    // Cayley transform of a scaled skew-symmetric matrix: a rotation that
    // moves each axis by an angle that grows with `mixing`.
    const Eigen::MatrixXd a = mixing * (g - g.transpose()) / std::sqrt(2.0 * static_cast<double>(d));
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(d, d);
    f.rotation = (id - a).partialPivLu().solve(id + a);
  }
  f.partition = make_partition(d, h, k);
  const Eigen::VectorXd shared = anisotropy * unit_gaussian(rng, d);
  f.train = desk_batch(rng, n_train, f.rotation, shared, d, h, k);
  f.dev = desk_batch(rng, n_dev, f.rotation, shared, d, h, k);
  f.test = desk_batch(rng, n_test, f.rotation, shared, d, h, k);
  return f;
}

TempDir::TempDir() {
  static std::atomic<int> counter{0};
  const auto base = std::filesystem::temp_directory_path() /
                    ("structemb-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  std::filesystem::create_directories(base);
  root_ = base.string();
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(root_, ec);
}

std::string TempDir::path(const std::string& name) const { return (std::filesystem::path(root_) / name).string(); }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

}  // namespace fixture
