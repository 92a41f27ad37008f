#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "structemb/trainer.hpp"

namespace structemb {

// Run configuration. Defaults are the reference hyper-parameters.
struct Config {
  long d = 384;
  long h = 16;
  double alpha = 1.0;
  double consistency_weight = 1.0;
  double lr = 1e-5;
  int warmup = 100;
  int epochs = 8;
  int batch = 64;
  int eval_every = 1000;
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  int restarts = 4;
  int wl_iterations = 2;

  std::string data_root;  // prefix for relative paths; defaults to $S3_DATA_DIR
  std::string word_vectors;
  std::string embeddings;
  std::string train_data;
  std::string dev_data;
  std::string test_data;
  std::string checkpoint;

  TrainConfig train_config(std::uint64_t seed) const;

  // Joins a relative path onto data_root. Absolute or empty paths pass
  // through unchanged.
  std::string resolve(const std::string& path) const;
};

// Flat "key = value" lines; '#' starts a comment; string values may be
// quoted; seeds is a comma list, optionally in brackets. Unknown keys and
// unparsable values throw BadConfig.
void apply_config_text(Config& config, const std::string& text, const std::string& origin = "<config>");
Config load_config(const std::string& path);

// Fresh config with data_root taken from the environment.
Config default_config();

std::string config_to_text(const Config& config);

}  // namespace structemb
