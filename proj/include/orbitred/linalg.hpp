#pragma once

#include <optional>
#include <span>
#include <vector>

#include "orbitred/vec.hpp"

namespace orbitred::linalg {

// Exact linear algebra over Q. Vectors of differing length are padded
// with zeros to the longest one.

std::size_t rank(std::span<const RVec> vectors);
bool independent(std::span<const RVec> vectors);
bool in_span(const RVec& target, std::span<const RVec> vectors);

// Coefficients c with sum c_i * vectors[i] == target, if any. When the
// vectors are dependent, free coefficients are set to zero.
std::optional<std::vector<Rational>> solve_combination(const RVec& target, std::span<const RVec> vectors);

RVec combine(std::span<const Rational> coeffs, std::span<const RVec> vectors, std::size_t dim);

// Dense rational matrix, row-major.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Rational> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c) {}

  Rational& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

  RVec column(std::size_t c) const;
  RVec apply(std::span<const Rational> x) const;

  friend bool operator==(const Matrix&, const Matrix&) = default;
};

}  // namespace orbitred::linalg
