#include "structemb/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <vector>

namespace structemb {

namespace {

constexpr char kMagic[4] = {'S', '3', 'P', '1'};

class Writer {
 public:
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) bytes_.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  }
  void f64(double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) bytes_.push_back(static_cast<char>((bits >> (8 * i)) & 0xFF));
  }
  void raw(const char* p, std::size_t n) { bytes_.insert(bytes_.end(), p, p + n); }
  const std::vector<char>& bytes() const { return bytes_; }

 private:
  std::vector<char> bytes_;
};

class Reader {
 public:
  Reader(std::vector<unsigned char> bytes, std::string path) : bytes_(std::move(bytes)), path_(std::move(path)) {}

  std::uint64_t take(int n) {
    if (pos_ + static_cast<std::size_t>(n) > bytes_.size()) {
      throw Error(ErrorCode::BadFormat, "'" + path_ + "' is truncated");
    }
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) v |= static_cast<std::uint64_t>(bytes_[pos_++]) << (8 * i);
    return v;
  }
  std::uint32_t u32() { return static_cast<std::uint32_t>(take(4)); }
  double f64() { return std::bit_cast<double>(take(8)); }
  bool at_end() const { return pos_ == bytes_.size(); }

 private:
  std::vector<unsigned char> bytes_;
  std::string path_;
  std::size_t pos_ = 0;
};

}  // namespace

void save_checkpoint(const Model& model, const std::string& path) {
  Writer w;
  w.raw(kMagic, 4);
  const auto d = model.dim();
  const int k = model.aspect_count();
  w.u32(static_cast<std::uint32_t>(d));
  w.u32(static_cast<std::uint32_t>(k));
  w.u32(static_cast<std::uint32_t>(model.partition.sub_dim()));
  for (Eigen::Index r = 0; r < d; ++r) {
    for (Eigen::Index c = 0; c < d; ++c) w.f64(model.weights(r, c));
  }
  for (int i = 0; i < k; ++i) w.f64(model.betas(i));
  for (const auto& range : model.partition.ranges()) {
    w.u32(static_cast<std::uint32_t>(range.start));
    w.u32(static_cast<std::uint32_t>(range.end));
  }
  w.u32(static_cast<std::uint32_t>(model.partition.residual().start));
  w.u32(static_cast<std::uint32_t>(model.partition.residual().end));

  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Unreadable, "cannot write '" + tmp + "'");
    out.write(w.bytes().data(), static_cast<std::streamsize>(w.bytes().size()));
    if (!out) throw Error(ErrorCode::Unreadable, "write failed for '" + tmp + "'");
  }
  std::filesystem::rename(tmp, path);
}

Model load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Unreadable, "cannot open '" + path + "'");
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw Error(ErrorCode::BadFormat, "'" + path + "' is not an S3P1 checkpoint");
  }
  bytes.erase(bytes.begin(), bytes.begin() + 4);
  Reader r(std::move(bytes), path);
  const auto d = static_cast<Eigen::Index>(r.u32());
  const int k = static_cast<int>(r.u32());
  const auto h = static_cast<Eigen::Index>(r.u32());

  Model m;
  m.weights.resize(d, d);
  for (Eigen::Index row = 0; row < d; ++row) {
    for (Eigen::Index c = 0; c < d; ++c) m.weights(row, c) = r.f64();
  }
  m.betas.resize(k);
  for (int i = 0; i < k; ++i) m.betas(i) = r.f64();
  std::vector<IndexRange> ranges;
  for (int i = 0; i < k; ++i) {
    const auto start = static_cast<Eigen::Index>(r.u32());
    ranges.push_back({start, static_cast<Eigen::Index>(r.u32())});
  }
  const auto rs = static_cast<Eigen::Index>(r.u32());
  const IndexRange residual{rs, static_cast<Eigen::Index>(r.u32())};
  if (!r.at_end()) throw Error(ErrorCode::BadFormat, "'" + path + "' has trailing bytes");
  m.partition = PartitionMap(d, h, std::move(ranges), residual);
  return m;
}

}  // namespace structemb
