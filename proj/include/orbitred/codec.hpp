#pragma once

#include <json.hpp>

#include "orbitred/error.hpp"
#include "orbitred/group.hpp"
#include "orbitred/linalg.hpp"

// JSON codec for exact values: rationals travel as "num/den" strings and
// vectors as arrays of such strings.

namespace nlohmann {

template <>
struct adl_serializer<mpq_class> {
  static void to_json(json& j, const mpq_class& q) { j = orbitred::to_string(q); }
  static void from_json(const json& j, mpq_class& q) {
    if (j.is_string()) {
      q = orbitred::parse_rational(j.get<std::string>());
    } else if (j.is_number_integer()) {
      q = mpq_class(j.get<long>());
    } else {
      orbitred::fail(orbitred::ErrorCode::ParseError, "rational must be a \"num/den\" string, got " + j.dump());
    }
  }
};

}  // namespace nlohmann

namespace orbitred {

using json = nlohmann::json;

inline void to_json(json& j, const RVec& v) {
  j = json::array();
  for (const auto& c : v.coords()) j.push_back(to_string(c));
}
inline void from_json(const json& j, RVec& v) {
  if (!j.is_array()) fail(ErrorCode::ParseError, "vector must be an array, got " + j.dump());
  std::vector<Rational> coords;
  for (const auto& e : j) coords.push_back(e.get<Rational>());
  v = RVec(std::move(coords));
}

inline void to_json(json& j, const TorusVec& v) {
  j = json::array();
  for (const auto& c : v.coords()) j.push_back(to_string(c));
}
inline void from_json(const json& j, TorusVec& v) {
  RVec r = j.get<RVec>();
  v = TorusVec(std::vector<Rational>(r.coords().begin(), r.coords().end()));
}

inline void to_json(json& j, const GroupElement& g) { j = json{{"torus", g.torus}, {"real", g.real}}; }
inline void from_json(const json& j, GroupElement& g) {
  g.torus = j.at("torus").get<TorusVec>();
  g.real = j.at("real").get<RVec>();
}

namespace linalg {
inline void to_json(json& j, const Matrix& m) {
  j = json::array();
  for (std::size_t r = 0; r < m.rows; ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols; ++c) row.push_back(to_string(m(r, c)));
    j.push_back(std::move(row));
  }
}
inline void from_json(const json& j, Matrix& m) {
  if (!j.is_array()) fail(ErrorCode::ParseError, "matrix must be an array of rows");
  std::size_t rows = j.size();
  std::size_t cols = rows ? j[0].size() : 0;
  m = Matrix(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (j[r].size() != cols) fail(ErrorCode::ParseError, "ragged matrix");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = j[r][c].get<Rational>();
  }
}
}  // namespace linalg

}  // namespace orbitred
