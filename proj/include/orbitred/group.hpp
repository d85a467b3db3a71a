#pragma once

#include "orbitred/vec.hpp"

namespace orbitred {

// Element (t, r) of T^a (+) R^b.
struct GroupElement {
  TorusVec torus;
  RVec real;

  static GroupElement identity(std::size_t torus_dim, std::size_t real_dim) {
    return {TorusVec(torus_dim), RVec(real_dim)};
  }

  friend bool operator==(const GroupElement& a, const GroupElement& b) {
    return a.torus == b.torus && a.real == b.real && a.real.dim() == b.real.dim();
  }
};

// max |r_i|; the torus part never contributes.
Rational seminorm(const GroupElement& g);

GroupElement group_add(const GroupElement& g, const GroupElement& h);
GroupElement group_inverse(const GroupElement& g);
GroupElement group_sub(const GroupElement& g, const GroupElement& h);

// ||g - h||. A pseudometric: zero for elements that differ only on the torus.
Rational rho_group(const GroupElement& g, const GroupElement& h);

}  // namespace orbitred
