// io.hpp — JSON file formats for channels and results.
//
// Channel file (UTF-8 JSON): {"dim_v": N, "dim_a": a, "B": [[[re,im],...],...],
// "C": ..., "metadata": {string: string}}. B and C are row-major nested
// arrays of [re, im] pairs with shape (dim_v*dim_a) x dim_v. Matrix files
// for the natural and Choi representations use {"dim_v": N, "matrix": ...}
// with the same complex encoding.

#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "dnorm/matrix.hpp"
#include "dnorm/superop.hpp"
#include "dnorm/version.hpp"

namespace dnorm {

using Json = nlohmann::json;

struct ChannelFile {
  Eigen::Index dim_v = 0;
  Eigen::Index dim_a = 0;
  CMatrix b;
  CMatrix c;
  std::map<std::string, std::string> metadata;

  StinespringPair pair() const { return StinespringPair(dim_v, dim_a, b, c); }
};

inline Json json_from_cmatrix(const CMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      row.push_back(Json::array({m(i, j).real(), m(i, j).imag()}));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

inline CMatrix cmatrix_from_json(const Json& j, const char* what) {
  if (!j.is_array() || j.empty()) {
    throw std::invalid_argument(std::string(what) + ": expected a non-empty array of rows");
  }
  const Eigen::Index rows = Eigen::Index(j.size());
  const Eigen::Index cols = Eigen::Index(j.at(0).size());
  CMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Json& row = j.at(size_t(i));
    if (!row.is_array() || Eigen::Index(row.size()) != cols) {
      throw std::invalid_argument(std::string(what) + ": ragged matrix rows");
    }
    for (Eigen::Index k = 0; k < cols; ++k) {
      const Json& cell = row.at(size_t(k));
      if (!cell.is_array() || cell.size() != 2 || !cell.at(0).is_number() ||
          !cell.at(1).is_number()) {
        throw std::invalid_argument(std::string(what) +
                                    ": complex entries must be [re, im] number pairs");
      }
      m(i, k) = Complex(cell.at(0).get<double>(), cell.at(1).get<double>());
    }
  }
  return m;
}

inline Json channel_to_json(const ChannelFile& file) {
  Json j;
  j["dim_v"] = file.dim_v;
  j["dim_a"] = file.dim_a;
  j["B"] = json_from_cmatrix(file.b);
  j["C"] = json_from_cmatrix(file.c);
  if (!file.metadata.empty()) j["metadata"] = file.metadata;
  return j;
}

inline ChannelFile channel_from_json(const Json& j) {
  ChannelFile file;
  if (!j.contains("dim_v") || !j.contains("dim_a") || !j.contains("B") || !j.contains("C")) {
    throw std::invalid_argument("channel file: required keys are dim_v, dim_a, B, C");
  }
  file.dim_v = j.at("dim_v").get<Eigen::Index>();
  file.dim_a = j.at("dim_a").get<Eigen::Index>();
  if (file.dim_v < 1 || file.dim_a < 1) {
    throw std::invalid_argument("channel file: dimensions must be positive");
  }
  if (!is_power_of_two(file.dim_v)) {
    throw std::invalid_argument(
        "channel file: dim_v must be a power of 2 (the Pauli coordinate chart requires it)");
  }
  file.b = cmatrix_from_json(j.at("B"), "channel file B");
  file.c = cmatrix_from_json(j.at("C"), "channel file C");
  const Eigen::Index rows = file.dim_v * file.dim_a;
  if (file.b.rows() != rows || file.b.cols() != file.dim_v || file.c.rows() != rows ||
      file.c.cols() != file.dim_v) {
    throw std::invalid_argument("channel file: B and C must have shape (dim_v*dim_a) x dim_v");
  }
  if (j.contains("metadata")) {
    for (const auto& [key, value] : j.at("metadata").items()) {
      if (!value.is_string()) {
        throw std::invalid_argument("channel file: metadata values must be strings");
      }
      file.metadata[key] = value.get<std::string>();
    }
  }
  return file;
}

inline ChannelFile channel_from_pair(const StinespringPair& p) {
  ChannelFile file;
  file.dim_v = p.dim_v;
  file.dim_a = p.dim_a;
  file.b = p.b;
  file.c = p.c;
  return file;
}

inline Json natural_to_json(const NaturalRep& rep) {
  Json j;
  j["dim_v"] = rep.dim_v;
  j["matrix"] = json_from_cmatrix(rep.matrix);
  return j;
}

inline NaturalRep natural_from_json(const Json& j) {
  if (!j.contains("dim_v") || !j.contains("matrix")) {
    throw std::invalid_argument("natural-representation file: required keys are dim_v, matrix");
  }
  NaturalRep rep;
  rep.dim_v = j.at("dim_v").get<Eigen::Index>();
  if (rep.dim_v < 1 || !is_power_of_two(rep.dim_v)) {
    throw std::invalid_argument(
        "natural-representation file: dim_v must be a power of 2 (the Pauli coordinate chart requires it)");
  }
  rep.matrix = cmatrix_from_json(j.at("matrix"), "natural-representation matrix");
  const Eigen::Index n2 = rep.dim_v * rep.dim_v;
  if (rep.matrix.rows() != n2 || rep.matrix.cols() != n2) {
    throw std::invalid_argument("natural-representation file: matrix must be N^2 x N^2");
  }
  return rep;
}

inline Json choi_to_json(const ChoiMatrix& choi) {
  Json j;
  j["dim_v"] = choi.dim_v;
  j["matrix"] = json_from_cmatrix(choi.matrix);
  return j;
}

struct ResultRecord {
  double value = 0.0;
  double epsilon = 0.0;
  std::string method;
  long iterations = 0;
  double wall_time_s = 0.0;
  std::optional<double> m;
  std::optional<double> alpha;
  std::optional<double> eps_prime;
  bool uncertified = false;
  std::string tool_version = kVersion;
};

inline Json result_to_json(const ResultRecord& r) {
  Json j;
  j["value"] = r.value;
  j["epsilon"] = r.epsilon;
  j["method"] = r.method;
  j["iterations"] = r.iterations;
  j["wall_time_s"] = r.wall_time_s;
  if (r.m && r.alpha && r.eps_prime) {
    j["constants"] = Json{{"M", *r.m}, {"alpha", *r.alpha}, {"eps_prime", *r.eps_prime}};
  }
  if (r.uncertified) j["uncertified"] = true;
  j["tool_version"] = r.tool_version;
  return j;
}

inline Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  Json j;
  try {
    in >> j;
  } catch (const Json::parse_error& e) {
    throw std::invalid_argument("invalid JSON in " + path + ": " + e.what());
  }
  return j;
}

inline void save_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot open file for writing: " + path);
  out << j.dump(2) << "\n";
}

}  // namespace dnorm
