#pragma once

#include <random>

#include "orbitred/group.hpp"

namespace orbitred::testing {

// Hand-rolled generators for property tests. Only raw engine output is used
// so sequences are identical across standard libraries.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : engine_(seed) {}

  long integer(long lo, long hi) {
    auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<long>(engine_() % span);
  }

  Rational rational(long height = 10, long max_den = 8) {
    return make_rational(integer(-height, height), integer(1, max_den));
  }

  Rational unit_rational(long max_den = 16) {
    long den = integer(1, max_den);
    return make_rational(integer(0, den - 1), den);
  }

  RVec rvec(std::size_t dim, long height = 10, long max_den = 8) {
    RVec v(dim);
    for (std::size_t i = 0; i < dim; ++i) v[i] = rational(height, max_den);
    return v;
  }

  TorusVec torus(std::size_t dim) {
    std::vector<Rational> t(dim);
    for (auto& c : t) c = unit_rational();
    return TorusVec(std::move(t));
  }

  GroupElement element(std::size_t a, std::size_t b) { return {torus(a), rvec(b)}; }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace orbitred::testing
