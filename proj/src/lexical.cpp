#include "structemb/lexical.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "structemb/error.hpp"

namespace structemb {

namespace {

std::string lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

void WordVectorTable::add(std::string_view token, const Eigen::VectorXd& v) {
  if (v.size() == 0) throw Error(ErrorCode::DimMismatch, "zero-length vector");
  if (dim_ == 0) {
    dim_ = static_cast<int>(v.size());
  } else if (v.size() != dim_) {
    throw Error(ErrorCode::DimMismatch, "token '" + std::string(token) + "' has dim " +
                                            std::to_string(v.size()) + ", expected " +
                                            std::to_string(dim_));
  }
  entries_.emplace(lowercase(token), v);
}

const Eigen::VectorXd* WordVectorTable::find(std::string_view token) const {
  auto it = entries_.find(lowercase(token));
  return it == entries_.end() ? nullptr : &it->second;
}

WordVectorTable load_vectors(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Unreadable, "cannot open '" + path + "'");
  WordVectorTable table;
  std::string line;
  std::size_t line_no = 0;
  std::vector<double> values;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string token;
    if (!(fields >> token)) continue;
    values.clear();
    std::string field;
    while (fields >> field) {
      try {
        std::size_t used = 0;
        values.push_back(std::stod(field, &used));
        if (used != field.size()) throw std::invalid_argument(field);
      } catch (const std::exception&) {
        throw Error(ErrorCode::BadFormat, path + ":" + std::to_string(line_no) +
                                              ": not a number '" + field + "'");
      }
    }
    try {
      table.add(token, Eigen::Map<const Eigen::VectorXd>(values.data(),
                                                         static_cast<Eigen::Index>(values.size())));
    } catch (const Error& e) {
      throw Error(e.code(), path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (table.empty()) throw Error(ErrorCode::EmptyTable, "no vectors in '" + path + "'");
  return table;
}

std::string normalize_label(std::string_view label) {
  std::string s = lowercase(label);
  auto dash = s.rfind('-');
  if (dash != std::string::npos && dash > 0 && dash + 1 < s.size() &&
      std::all_of(s.begin() + static_cast<std::ptrdiff_t>(dash) + 1, s.end(),
                  [](unsigned char c) { return std::isdigit(c); })) {
    s.erase(dash);
  }
  return s;
}

double label_similarity(const WordVectorTable* table, std::string_view a, std::string_view b) {
  const std::string na = normalize_label(a);
  const std::string nb = normalize_label(b);
  if (na == nb) return 1.0;
  if (table == nullptr) return 0.0;
  const Eigen::VectorXd* va = table->find(na);
  const Eigen::VectorXd* vb = table->find(nb);
  if (va == nullptr || vb == nullptr) return 0.0;
  const double denom = va->norm() * vb->norm();
  if (denom == 0.0) return 0.0;
  return std::clamp(va->dot(*vb) / denom, -1.0, 1.0);
}

}  // namespace structemb
