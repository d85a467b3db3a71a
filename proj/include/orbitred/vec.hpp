#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "orbitred/rational.hpp"

namespace orbitred {

// Element of R^n viewed inside R^<omega. Equality pads the shorter vector
// with zeros, so (1, 2) == (1, 2, 0).
class RVec {
 public:
  RVec() = default;
  explicit RVec(std::size_t dim) : coords_(dim) {}
  explicit RVec(std::vector<Rational> coords) : coords_(std::move(coords)) {}
  RVec(std::initializer_list<Rational> coords) : coords_(coords) {}

  static RVec unit(std::size_t dim, std::size_t index);
  static RVec from_ints(std::initializer_list<long> values);

  std::size_t dim() const noexcept { return coords_.size(); }
  bool empty() const noexcept { return coords_.empty(); }
  const Rational& operator[](std::size_t i) const { return coords_[i]; }
  Rational& operator[](std::size_t i) { return coords_[i]; }
  // Coordinate with implicit trailing zeros.
  Rational at_or_zero(std::size_t i) const;
  std::span<const Rational> coords() const noexcept { return coords_; }
  std::vector<Rational>& mutable_coords() noexcept { return coords_; }

  bool is_zero() const;
  RVec padded(std::size_t dim) const;

  RVec& operator+=(const RVec& other);
  RVec& operator-=(const RVec& other);
  RVec& operator*=(const Rational& s);

  friend RVec operator+(RVec a, const RVec& b) { return a += b; }
  friend RVec operator-(RVec a, const RVec& b) { return a -= b; }
  friend RVec operator*(const Rational& s, RVec a) { return a *= s; }
  friend RVec operator-(RVec a) { return a *= Rational(-1); }
  friend bool operator==(const RVec& a, const RVec& b);

 private:
  std::vector<Rational> coords_;
};

Rational sup_norm(const RVec& v);
Rational sup_distance(const RVec& a, const RVec& b);
std::string to_string(const RVec& v);

// Point of T^n with each coordinate reduced into [0,1) on construction.
class TorusVec {
 public:
  TorusVec() = default;
  explicit TorusVec(std::size_t dim) : coords_(dim) {}
  explicit TorusVec(std::vector<Rational> coords);
  TorusVec(std::initializer_list<Rational> coords);

  std::size_t dim() const noexcept { return coords_.size(); }
  const Rational& operator[](std::size_t i) const { return coords_[i]; }
  std::span<const Rational> coords() const noexcept { return coords_; }
  bool is_zero() const;

  friend bool operator==(const TorusVec&, const TorusVec&) = default;

 private:
  std::vector<Rational> coords_;
};

}  // namespace orbitred
