#ifndef CATDIL_INTERCHANGE_HPP
#define CATDIL_INTERCHANGE_HPP

// Matrix interchange format (JSON):
//   { "shape":   [[dimA, dimB], ...],
//     "entries": [[re, im], ...]          // row-major, dimension^2 pairs
//     "input_factors": [i, ...] }         // Choi operators only

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "catdil/choi.hpp"
#include "catdil/error.hpp"
#include "catdil/operator.hpp"

namespace catdil {

using json = nlohmann::json;

inline json to_json(const LabeledOperator &x) {
  json shape = json::array();
  for (const auto &f : x.shape().factors()) {
    shape.push_back({f.a, f.b});
  }
  json entries = json::array();
  const auto &m = x.matrix();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      entries.push_back({m(r, c).real(), m(r, c).imag()});
    }
  }
  return {{"shape", std::move(shape)}, {"entries", std::move(entries)}};
}

inline json to_json(const ChoiOperator &choi) {
  json j = to_json(choi.op());
  j["input_factors"] = choi.input_factors();
  return j;
}

inline LabeledOperator operator_from_json(const json &j) {
  try {
    std::vector<FactorDims> factors;
    for (const auto &f : j.at("shape")) {
      if (!f.is_array() || f.size() != 2) {
        throw IoError("interchange: each shape entry must be [dimA, dimB]");
      }
      factors.push_back({f.at(0).get<std::size_t>(), f.at(1).get<std::size_t>()});
    }
    FactorShape shape(std::move(factors));
    const auto dim = static_cast<Eigen::Index>(shape.dimension());
    const auto &entries = j.at("entries");
    if (!entries.is_array() || static_cast<Eigen::Index>(entries.size()) != dim * dim) {
      throw IoError("interchange: expected " + std::to_string(dim * dim) + " entries");
    }
    Matrix m(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r) {
      for (Eigen::Index c = 0; c < dim; ++c) {
        const auto &e = entries[static_cast<std::size_t>(r * dim + c)];
        if (!e.is_array() || e.size() != 2) {
          throw IoError("interchange: each entry must be [re, im]");
        }
        m(r, c) = cplx(e.at(0).get<double>(), e.at(1).get<double>());
      }
    }
    return {std::move(shape), std::move(m)};
  } catch (const json::exception &e) {
    throw IoError(std::string("interchange: ") + e.what());
  } catch (const InvalidArgument &e) {
    throw IoError(std::string("interchange: ") + e.what());
  }
}

inline ChoiOperator choi_from_json(const json &j) {
  auto op = operator_from_json(j);
  try {
    return {std::move(op), j.at("input_factors").get<std::vector<std::size_t>>()};
  } catch (const json::exception &e) {
    throw IoError(std::string("interchange: ") + e.what());
  } catch (const InvalidArgument &e) {
    throw IoError(std::string("interchange: ") + e.what());
  }
}

inline json read_json_file(const std::string &path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open " + path);
  }
  try {
    return json::parse(in);
  } catch (const json::exception &e) {
    throw IoError(path + ": " + e.what());
  }
}

inline void write_json_file(const std::string &path, const json &j) {
  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot write " + path);
  }
  out << j.dump() << '\n';
  if (!out) {
    throw IoError("write failed for " + path);
  }
}

inline LabeledOperator read_operator(const std::string &path) { return operator_from_json(read_json_file(path)); }

/// Reads an operator file and checks it is a state; failures are I/O errors.
inline DensityOperator read_state(const std::string &path) {
  auto op = read_operator(path);
  try {
    return DensityOperator(std::move(op));
  } catch (const InvalidArgument &e) {
    throw IoError(path + ": " + e.what());
  }
}

inline void write_operator(const std::string &path, const LabeledOperator &x) { write_json_file(path, to_json(x)); }

inline ChoiOperator read_choi(const std::string &path) { return choi_from_json(read_json_file(path)); }

inline void write_choi(const std::string &path, const ChoiOperator &choi) { write_json_file(path, to_json(choi)); }

} // namespace catdil

#endif
