#include "orbitred/linalg.hpp"

#include <algorithm>

#include "orbitred/error.hpp"

namespace orbitred::linalg {

namespace {

std::size_t max_dim(std::span<const RVec> vectors, std::size_t at_least = 0) {
  std::size_t n = at_least;
  for (const auto& v : vectors) n = std::max(n, v.dim());
  return n;
}

// Row-reduces `m` (rows x cols) in place over the first `pivot_cols` columns;
// returns pivot column per pivot row.
std::vector<std::size_t> row_reduce(std::vector<std::vector<Rational>>& m, std::size_t pivot_cols) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < pivot_cols && row < m.size(); ++col) {
    std::size_t sel = row;
    while (sel < m.size() && m[sel][col] == 0) ++sel;
    if (sel == m.size()) continue;
    std::swap(m[row], m[sel]);
    Rational inv = 1 / m[row][col];
    for (auto& x : m[row]) x *= inv;
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == row || m[r][col] == 0) continue;
      Rational f = m[r][col];
      for (std::size_t c = col; c < m[r].size(); ++c) m[r][c] -= f * m[row][c];
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

}  // namespace

std::size_t rank(std::span<const RVec> vectors) {
  std::size_t n = max_dim(vectors);
  std::vector<std::vector<Rational>> m;
  m.reserve(vectors.size());
  for (const auto& v : vectors) { auto p = v.padded(n); m.emplace_back(p.coords().begin(), p.coords().end()); }
  return row_reduce(m, n).size();
}

bool independent(std::span<const RVec> vectors) { return rank(vectors) == vectors.size(); }

std::optional<std::vector<Rational>> solve_combination(const RVec& target, std::span<const RVec> vectors) {
  std::size_t n = max_dim(vectors, target.dim());
  std::size_t k = vectors.size();
  // augmented system: n equations, k unknowns
  std::vector<std::vector<Rational>> m(n, std::vector<Rational>(k + 1));
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t i = 0; i < vectors[j].dim(); ++i) m[i][j] = vectors[j][i];
  for (std::size_t i = 0; i < target.dim(); ++i) m[i][k] = target[i];

  auto pivots = row_reduce(m, k);
  for (std::size_t r = pivots.size(); r < n; ++r)
    if (m[r][k] != 0) return std::nullopt;

  std::vector<Rational> coeffs(k);
  for (std::size_t r = 0; r < pivots.size(); ++r) coeffs[pivots[r]] = m[r][k];
  return coeffs;
}

bool in_span(const RVec& target, std::span<const RVec> vectors) {
  return solve_combination(target, vectors).has_value();
}

RVec combine(std::span<const Rational> coeffs, std::span<const RVec> vectors, std::size_t dim) {
  if (coeffs.size() != vectors.size()) fail(ErrorCode::DimensionMismatch, "coefficient count mismatch");
  RVec out(dim);
  for (std::size_t j = 0; j < vectors.size(); ++j) {
    if (coeffs[j] == 0) continue;
    for (std::size_t i = 0; i < vectors[j].dim(); ++i) out[i] += coeffs[j] * vectors[j][i];
  }
  return out;
}

RVec Matrix::column(std::size_t c) const {
  RVec v(rows);
  for (std::size_t r = 0; r < rows; ++r) v[r] = (*this)(r, c);
  return v;
}

RVec Matrix::apply(std::span<const Rational> x) const {
  if (x.size() != cols) fail(ErrorCode::DimensionMismatch, "matrix/vector size mismatch");
  RVec out(rows);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      if (x[c] != 0) out[r] += (*this)(r, c) * x[c];
  return out;
}

}  // namespace orbitred::linalg
