#pragma once

// Independent reference computations used by the unit and acceptance tests.
// Nothing here calls into the library's linear algebra.

#include <algorithm>
#include <optional>
#include <vector>

#include "orbitred/error.hpp"
#include "orbitred/stabilizer.hpp"
#include "support.hpp"

namespace orbitred::testing {

using Rows = std::vector<std::vector<Rational>>;

inline Rational dot(const RVec& a, const std::vector<Rational>& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < b.size(); ++i) s += a.at_or_zero(i) * b[i];
  return s;
}

// Basis of {a : a . u = 0 for every u in us}, by plain Gauss-Jordan.
inline Rows annihilator(const std::vector<RVec>& us, std::size_t n) {
  Rows m;
  for (const auto& u : us) {
    std::vector<Rational> row(n);
    for (std::size_t i = 0; i < n; ++i) row[i] = u.at_or_zero(i);
    m.push_back(row);
  }
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < m.size(); ++c) {
    std::size_t p = r;
    while (p < m.size() && m[p][c] == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[r]);
    Rational inv = 1 / m[r][c];
    for (auto& x : m[r]) x *= inv;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == r || m[i][c] == 0) continue;
      Rational f = m[i][c];
      for (std::size_t j = 0; j < n; ++j) m[i][j] -= f * m[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  Rows out;
  for (std::size_t free = 0; free < n; ++free) {
    if (std::find(pivots.begin(), pivots.end(), free) != pivots.end()) continue;
    std::vector<Rational> a(n);
    a[free] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) a[pivots[i]] = -m[i][free];
    out.push_back(a);
  }
  return out;
}

// Brute-force membership: is there z in [-box, box]^m with g - sum z_i l_i in U?
class BruteMember {
 public:
  BruteMember(const StabilizerSpec& spec, long box) : spec_(spec), box_(box) {
    ann_ = annihilator(spec.u_gens, spec.n);
    for (const auto& l : spec.lattice_gens) {
      std::vector<Rational> row;
      for (const auto& a : ann_) row.push_back(dot(l, a));
      lat_dots_.push_back(row);
    }
  }

  bool operator()(const RVec& g) const {
    std::vector<Rational> target;
    for (const auto& a : ann_) target.push_back(dot(g, a));
    std::vector<Rational> acc(ann_.size());
    return search(0, target, acc);
  }

 private:
  bool search(std::size_t i, const std::vector<Rational>& target, std::vector<Rational>& acc) const {
    if (i == lat_dots_.size()) return acc == target;
    for (long z = -box_; z <= box_; ++z) {
      for (std::size_t j = 0; j < acc.size(); ++j) acc[j] += z * lat_dots_[i][j];
      bool hit = search(i + 1, target, acc);
      for (std::size_t j = 0; j < acc.size(); ++j) acc[j] -= z * lat_dots_[i][j];
      if (hit) return true;
    }
    return false;
  }

  StabilizerSpec spec_;
  long box_;
  Rows ann_;
  Rows lat_dots_;
};

// Fraction-free (Bareiss) determinant.
inline Integer bareiss_det(std::vector<std::vector<Integer>> a) {
  const std::size_t n = a.size();
  if (n == 0) return 1;
  Integer prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t p = k + 1;
      while (p < n && a[p][k] == 0) ++p;
      if (p == n) return 0;
      std::swap(a[k], a[p]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

inline void index_subsets(std::size_t n, std::size_t r, std::size_t from, std::vector<std::size_t>& cur,
                          std::vector<std::vector<std::size_t>>& out) {
  if (cur.size() == r) {
    out.push_back(cur);
    return;
  }
  for (std::size_t i = from; i < n; ++i) {
    cur.push_back(i);
    index_subsets(n, r, i + 1, cur, out);
    cur.pop_back();
  }
}

// gcd of the r x r minors of an integer matrix. For the row lattice of rank
// r this is an invariant, and for sublattices it is multiplied by the index.
inline Integer minor_gcd(const std::vector<std::vector<Integer>>& rows, std::size_t cols, std::size_t r) {
  std::vector<std::vector<std::size_t>> rs, cs;
  std::vector<std::size_t> cur;
  index_subsets(rows.size(), r, 0, cur, rs);
  index_subsets(cols, r, 0, cur, cs);
  Integer g = 0;
  for (const auto& ri : rs)
    for (const auto& ci : cs) {
      std::vector<std::vector<Integer>> m(r, std::vector<Integer>(r));
      for (std::size_t a = 0; a < r; ++a)
        for (std::size_t b = 0; b < r; ++b) m[a][b] = rows[ri[a]][ci[b]];
      Integer d = bareiss_det(std::move(m));
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), d.get_mpz_t());
    }
  return g;
}

inline std::size_t integer_rank(const std::vector<std::vector<Integer>>& rows, std::size_t cols) {
  std::size_t r = std::min(rows.size(), cols);
  while (r > 0 && minor_gcd(rows, cols, r) == 0) --r;
  return r;
}

// Exact membership without enumeration: project away U, clear denominators,
// and test whether adding g changes the rank or the determinantal divisor of
// the lattice (g is in L iff L + Zg = L, and L + Zg has index
// minor_gcd(L) / minor_gcd(L + Zg) over L when the ranks agree).
class DivisorMember {
 public:
  explicit DivisorMember(const StabilizerSpec& spec) : spec_(spec), ann_(annihilator(spec.u_gens, spec.n)) {}

  bool operator()(const RVec& g) const {
    const std::size_t cols = ann_.size();
    if (cols == 0) return true;
    Rows rows;
    for (const auto& l : spec_.lattice_gens) rows.push_back(project(l));
    rows.push_back(project(g));
    Integer den = 1;
    for (const auto& r : rows)
      for (const auto& x : r) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), x.get_den_mpz_t());
    std::vector<std::vector<Integer>> ints;
    for (const auto& r : rows) {
      std::vector<Integer> row;
      for (const auto& x : r) row.push_back(Integer(x * den));
      ints.push_back(row);
    }
    auto with_g = ints;
    ints.pop_back();
    std::size_t r = integer_rank(ints, cols);
    if (integer_rank(with_g, cols) != r) return false;
    if (r == 0) return true;
    return minor_gcd(ints, cols, r) == minor_gcd(with_g, cols, r);
  }

 private:
  std::vector<Rational> project(const RVec& v) const {
    std::vector<Rational> out;
    for (const auto& a : ann_) out.push_back(dot(v, a));
    return out;
  }
  StabilizerSpec spec_;
  Rows ann_;
};

// Random spec with n <= max_n, at most max_gens generators and coefficient
// numerators and denominators bounded by `height`. Specs rejected by
// validate_spec are redrawn.
inline StabilizerSpec random_spec(Gen& gen, std::size_t max_n, std::size_t max_gens, long height,
                                  std::size_t max_lattice = 100) {
  for (;;) {
    StabilizerSpec s;
    s.n = static_cast<std::size_t>(gen.integer(1, static_cast<long>(max_n)));
    auto total = static_cast<std::size_t>(gen.integer(0, static_cast<long>(max_gens)));
    auto nu = static_cast<std::size_t>(gen.integer(0, static_cast<long>(std::min(total, s.n))));
    std::size_t nl = std::min(total - nu, max_lattice);
    for (std::size_t i = 0; i < nu; ++i) s.u_gens.push_back(gen.rvec(s.n, height, height));
    for (std::size_t i = 0; i < nl; ++i) s.lattice_gens.push_back(gen.rvec(s.n, height, height));
    try {
      validate_spec(s);
      return s;
    } catch (const Error&) {
    }
  }
}

// Integer combination of vectors, or nullopt; tested by exact elimination on
// an echelon family (pivot = last non-zero entry, strictly increasing).
inline bool integer_combination_of_echelon(RVec g, const std::vector<RVec>& basis) {
  for (std::size_t i = basis.size(); i-- > 0;) {
    const RVec& b = basis[i];
    std::size_t p = b.dim();
    while (p > 0 && b[p - 1] == 0) --p;
    if (p == 0) return false;
    Rational c = g.at_or_zero(p - 1) / b[p - 1];
    if (c.get_den() != 1) return false;
    g -= c * b.padded(g.dim());
  }
  return g.is_zero();
}

}  // namespace orbitred::testing
