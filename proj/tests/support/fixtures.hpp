#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "structemb/amr_graph.hpp"
#include "structemb/rng.hpp"
#include "structemb/trainer.hpp"

namespace fixture {

struct GraphOptions {
  int min_vars = 1;
  int max_vars = 6;
  int concept_pool = 4;     // small pools force ambiguous alignments
  double reentrancy = 0.3;  // chance of one extra relation edge
  double attribute = 0.4;   // chance per variable of a constant attribute
  double inverse = 0.3;     // chance a tree edge points child -> parent
};

// Random connected AMR graph with variables v0..v{n-1}, rooted at v0.
structemb::AmrGraph random_graph(structemb::Rng& rng, const GraphOptions& opt = {});

// Writes count x dim float rows in the EMB1 layout plus the sentence sidecar
// without going through the library writer.
void write_emb1(const std::string& path, const std::vector<std::vector<float>>& rows,
                const std::vector<std::string>& sentences);

// Small random decomposition problem for derivative checks.
struct GradientInstance {
  structemb::Model model;
  structemb::Batch batch;
};
GradientInstance random_gradient_instance(structemb::Rng& rng, int d, int k, int h, int b);

// Teacher embeddings e = Q [z_1; ...; z_K; r] + s with Q a rotation and s a
// direction shared by every sentence (real encoders are anisotropic). Each
// aspect latent z_k of a pair has cosine rho_k, the aspect's metric score;
// the residual r carries an independent similarity. `mixing` >= 1 draws a
// uniformly random Q; smaller values give a Cayley rotation whose angle grows
// with `mixing`. The aspect signals are linear in e either way.
struct DeskFixture {
  structemb::Batch train;
  structemb::Batch dev;
  structemb::Batch test;
  Eigen::MatrixXd rotation;
  structemb::PartitionMap partition;
};
DeskFixture desk_fixture(std::uint64_t seed, double mixing = 1.0, double anisotropy = 0.0, int n_train = 2000, int n_dev = 200, int n_test = 200,
                         long d = 384, long h = 16, int k = 15);

// Temporary directory removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  std::string path(const std::string& name) const;

 private:
  std::string root_;
};

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace fixture
