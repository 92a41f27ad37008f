#include "structemb/embedding_io.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "structemb/error.hpp"

namespace structemb {

namespace {

constexpr char kMagic[4] = {'E', 'M', 'B', '1'};

void put_u32(std::ostream& out, std::uint32_t v) {
  const std::array<char, 4> bytes = {static_cast<char>(v & 0xFF), static_cast<char>((v >> 8) & 0xFF),
                                     static_cast<char>((v >> 16) & 0xFF),
                                     static_cast<char>((v >> 24) & 0xFF)};
  out.write(bytes.data(), 4);
}

std::uint32_t get_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

}  // namespace

std::string sidecar_path(const std::string& path) { return path + ".txt"; }

void write_embeddings(const EmbeddingTable& table, const std::string& path) {
  if (!table.sentences.empty() &&
      table.sentences.size() != static_cast<std::size_t>(table.count())) {
    throw Error(ErrorCode::DimMismatch, "sentence count does not match embedding rows");
  }
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Unreadable, "cannot write '" + tmp + "'");
    out.write(kMagic, 4);
    put_u32(out, static_cast<std::uint32_t>(table.count()));
    put_u32(out, static_cast<std::uint32_t>(table.dim()));
    for (Eigen::Index r = 0; r < table.count(); ++r) {
      for (Eigen::Index c = 0; c < table.dim(); ++c) {
        put_u32(out, std::bit_cast<std::uint32_t>(table.values(r, c)));
      }
    }
    if (!out) throw Error(ErrorCode::Unreadable, "write failed for '" + tmp + "'");
  }
  std::filesystem::rename(tmp, path);
  if (!table.sentences.empty()) {
    std::ofstream side(sidecar_path(path), std::ios::binary | std::ios::trunc);
    for (const auto& s : table.sentences) side << s << '\n';
  }
}

EmbeddingTable read_embeddings(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Unreadable, "cannot open '" + path + "'");
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.size() < 12 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw Error(ErrorCode::BadFormat, "'" + path + "' is not an EMB1 file");
  }
  const std::uint32_t count = get_u32(bytes.data() + 4);
  const std::uint32_t dim = get_u32(bytes.data() + 8);
  const std::size_t expected = 12 + static_cast<std::size_t>(count) * dim * 4;
  if (bytes.size() != expected) {
    throw Error(ErrorCode::BadFormat, "'" + path + "': body has " + std::to_string(bytes.size() - 12) +
                                          " bytes, header implies " + std::to_string(expected - 12));
  }
  EmbeddingTable table;
  table.values.resize(count, dim);
  const unsigned char* p = bytes.data() + 12;
  for (std::uint32_t r = 0; r < count; ++r) {
    for (std::uint32_t c = 0; c < dim; ++c, p += 4) {
      table.values(r, c) = std::bit_cast<float>(get_u32(p));
    }
  }

  std::ifstream side(sidecar_path(path), std::ios::binary);
  if (side) {
    std::string line;
    while (std::getline(side, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      table.sentences.push_back(line);
    }
    if (table.sentences.size() != count) {
      throw Error(ErrorCode::DimMismatch, "'" + sidecar_path(path) + "' has " +
                                              std::to_string(table.sentences.size()) +
                                              " lines, expected " + std::to_string(count));
    }
  }
  return table;
}

SentenceIndex::SentenceIndex(const EmbeddingTable& table) {
  for (std::size_t i = 0; i < table.sentences.size(); ++i) {
    rows_.emplace(table.sentences[i], static_cast<Eigen::Index>(i));
  }
}

Eigen::Index SentenceIndex::row(const std::string& sentence) const {
  auto it = rows_.find(sentence);
  if (it == rows_.end()) throw Error(ErrorCode::EmptyData, "no embedding for sentence '" + sentence + "'");
  return it->second;
}

}  // namespace structemb
