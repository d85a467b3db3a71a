#include "orbitred/hnf.hpp"

#include <algorithm>

#include "orbitred/error.hpp"

namespace orbitred {

std::size_t pivot_column(const IntRow& row) {
  for (std::size_t c = row.size(); c-- > 0;)
    if (row[c] != 0) return c;
  fail(ErrorCode::PreconditionViolated, "pivot of a zero row");
}

namespace {

void axpy(IntRow& target, const Integer& factor, const IntRow& source) {
  for (std::size_t c = 0; c < target.size(); ++c) target[c] -= factor * source[c];
}

}  // namespace

std::vector<IntRow> lower_hermite_form(std::vector<IntRow> rows, std::size_t cols) {
  for (auto& r : rows) r.resize(cols);
  std::vector<IntRow> pivots;  // collected in descending pivot column

  for (std::size_t col = cols; col-- > 0;) {
    // Euclid on column `col` among the rows that are still active.
    while (true) {
      std::size_t best = rows.size();
      std::size_t nonzero = 0;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i][col] == 0) continue;
        ++nonzero;
        if (best == rows.size() || abs(rows[i][col]) < abs(rows[best][col])) best = i;
      }
      if (nonzero == 0) break;
      if (nonzero == 1) {
        IntRow pivot = std::move(rows[best]);
        rows.erase(rows.begin() + static_cast<std::ptrdiff_t>(best));
        if (pivot[col] < 0)
          for (auto& x : pivot) x = -x;
        pivots.push_back(std::move(pivot));
        break;
      }
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i == best || rows[i][col] == 0) continue;
        Integer f;
        mpz_fdiv_q(f.get_mpz_t(), rows[i][col].get_mpz_t(), rows[best][col].get_mpz_t());
        axpy(rows[i], f, rows[best]);
      }
    }
  }
  // Remaining rows are zero.
  std::reverse(pivots.begin(), pivots.end());

  // Reduce entries at earlier pivot columns, largest pivot first so that a
  // reduction never disturbs a column already normalised.
  for (std::size_t j = 1; j < pivots.size(); ++j) {
    for (std::size_t i = j; i-- > 0;) {
      std::size_t p = pivot_column(pivots[i]);
      Integer f;
      mpz_fdiv_q(f.get_mpz_t(), pivots[j][p].get_mpz_t(), pivots[i][p].get_mpz_t());
      if (f != 0) axpy(pivots[j], f, pivots[i]);
    }
  }
  return pivots;
}

std::vector<RVec> lower_hermite_basis(const std::vector<RVec>& generators, std::size_t dim) {
  Integer den = 1;
  for (const auto& g : generators)
    for (const auto& c : g.coords()) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());

  std::vector<IntRow> rows;
  for (const auto& g : generators) {
    if (g.dim() > dim) fail(ErrorCode::DimensionMismatch, "generator longer than ambient dimension");
    IntRow row(dim);
    for (std::size_t c = 0; c < g.dim(); ++c) {
      Rational scaled = g[c] * Rational(den);
      row[c] = scaled.get_num();
    }
    rows.push_back(std::move(row));
  }

  std::vector<RVec> out;
  for (const auto& row : lower_hermite_form(std::move(rows), dim)) {
    RVec v(dim);
    for (std::size_t c = 0; c < dim; ++c) v[c] = make_rational(row[c], den);
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace orbitred
