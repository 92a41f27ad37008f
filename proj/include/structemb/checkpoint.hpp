#pragma once

#include <string>

#include "structemb/trainer.hpp"

namespace structemb {

// Little-endian layout:
//   "S3P1" | u32 d | u32 K | u32 h | W (d*d f64, row-major) | K f64 betas |
//   K x (u32 start, u32 end) aspect blocks | (u32 start, u32 end) residual
void save_checkpoint(const Model& model, const std::string& path);
Model load_checkpoint(const std::string& path);

}  // namespace structemb
