#include "orbitred/group.hpp"

#include <string>

#include "orbitred/error.hpp"

namespace orbitred {

namespace {

void check_dims(const GroupElement& g, const GroupElement& h) {
  if (g.torus.dim() != h.torus.dim() || g.real.dim() != h.real.dim())
    fail(ErrorCode::DimensionMismatch,
         "group elements of shape T^" + std::to_string(g.torus.dim()) + "+R^" + std::to_string(g.real.dim()) +
             " and T^" + std::to_string(h.torus.dim()) + "+R^" + std::to_string(h.real.dim()));
}

}  // namespace

Rational seminorm(const GroupElement& g) { return sup_norm(g.real); }

GroupElement group_add(const GroupElement& g, const GroupElement& h) {
  check_dims(g, h);
  std::vector<Rational> t(g.torus.dim());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = g.torus[i] + h.torus[i];
  return {TorusVec(std::move(t)), g.real + h.real};
}

GroupElement group_inverse(const GroupElement& g) {
  std::vector<Rational> t(g.torus.dim());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = -g.torus[i];
  return {TorusVec(std::move(t)), -g.real};
}

GroupElement group_sub(const GroupElement& g, const GroupElement& h) { return group_add(g, group_inverse(h)); }

Rational rho_group(const GroupElement& g, const GroupElement& h) { return seminorm(group_sub(g, h)); }

}  // namespace orbitred
