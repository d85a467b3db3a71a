#include "orbitred/vec.hpp"

#include <algorithm>

#include "orbitred/error.hpp"

namespace orbitred {

RVec RVec::unit(std::size_t dim, std::size_t index) {
  RVec v(dim);
  v[index] = 1;
  return v;
}

RVec RVec::from_ints(std::initializer_list<long> values) {
  RVec v;
  for (long x : values) v.coords_.emplace_back(x);
  return v;
}

Rational RVec::at_or_zero(std::size_t i) const {
  return i < coords_.size() ? coords_[i] : Rational(0);
}

bool RVec::is_zero() const {
  return std::all_of(coords_.begin(), coords_.end(), [](const Rational& q) { return q == 0; });
}

RVec RVec::padded(std::size_t dim) const {
  RVec out = *this;
  if (out.coords_.size() < dim) out.coords_.resize(dim);
  return out;
}

RVec& RVec::operator+=(const RVec& other) {
  if (other.dim() > dim()) coords_.resize(other.dim());
  for (std::size_t i = 0; i < other.dim(); ++i) coords_[i] += other[i];
  return *this;
}

RVec& RVec::operator-=(const RVec& other) {
  if (other.dim() > dim()) coords_.resize(other.dim());
  for (std::size_t i = 0; i < other.dim(); ++i) coords_[i] -= other[i];
  return *this;
}

RVec& RVec::operator*=(const Rational& s) {
  for (auto& c : coords_) c *= s;
  return *this;
}

bool operator==(const RVec& a, const RVec& b) {
  std::size_t n = std::max(a.dim(), b.dim());
  for (std::size_t i = 0; i < n; ++i)
    if (a.at_or_zero(i) != b.at_or_zero(i)) return false;
  return true;
}

Rational sup_norm(const RVec& v) {
  Rational m = 0;
  for (const auto& c : v.coords()) m = std::max(m, abs_of(c));
  return m;
}

Rational sup_distance(const RVec& a, const RVec& b) { return sup_norm(a - b); }

std::string to_string(const RVec& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.dim(); ++i) {
    if (i) s += ", ";
    s += to_string(v[i]);
  }
  return s + ")";
}

TorusVec::TorusVec(std::vector<Rational> coords) : coords_(std::move(coords)) {
  for (auto& c : coords_) c = frac(c);
}

TorusVec::TorusVec(std::initializer_list<Rational> coords) : TorusVec(std::vector<Rational>(coords)) {}

bool TorusVec::is_zero() const {
  return std::all_of(coords_.begin(), coords_.end(), [](const Rational& q) { return q == 0; });
}

}  // namespace orbitred
