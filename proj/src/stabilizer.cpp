#include "orbitred/stabilizer.hpp"

#include <string>

#include "orbitred/error.hpp"
#include "orbitred/hnf.hpp"
#include "orbitred/linalg.hpp"

namespace orbitred {

namespace {

void check_dim(const RVec& v, std::size_t n, const char* what) {
  if (v.dim() != n)
    fail(ErrorCode::DimensionMismatch,
         std::string(what) + " has dimension " + std::to_string(v.dim()) + ", expected " + std::to_string(n));
}

std::vector<RVec> greedy_independent(const std::vector<RVec>& candidates, std::vector<RVec> kept_prefix) {
  std::size_t prefix = kept_prefix.size();
  for (const auto& c : candidates) {
    if (c.is_zero() || linalg::in_span(c, kept_prefix)) continue;
    kept_prefix.push_back(c);
  }
  return {kept_prefix.begin() + static_cast<std::ptrdiff_t>(prefix), kept_prefix.end()};
}

std::vector<RVec> unit_vectors(const std::vector<std::size_t>& coords, std::size_t n) {
  std::vector<RVec> out;
  for (auto k : coords) out.push_back(RVec::unit(n, k));
  return out;
}

// Component of g in span{e_k : k in coords} along span(u_basis).
RVec project_along(const RVec& g, const std::vector<RVec>& u_basis, const std::vector<std::size_t>& coords,
                   std::size_t n) {
  std::vector<RVec> basis = u_basis;
  for (auto k : coords) basis.push_back(RVec::unit(n, k));
  auto c = linalg::solve_combination(g, basis);
  if (!c) fail(ErrorCode::SingularBasis, "u basis and complement coordinates do not span R^n");
  RVec out(n);
  for (std::size_t i = 0; i < coords.size(); ++i) out[coords[i]] = (*c)[u_basis.size() + i];
  return out;
}

}  // namespace

RVec ValidatedStabilizer::project(const RVec& g) const { return project_along(g, u_basis_, coords_, spec_.n); }

std::vector<std::size_t> complementary_coords(const std::vector<RVec>& u_basis, std::size_t n) {
  std::vector<RVec> spanning = u_basis;
  std::vector<std::size_t> coords;
  for (std::size_t k = 0; k < n; ++k) {
    RVec e = RVec::unit(n, k);
    if (linalg::in_span(e, spanning)) continue;
    spanning.push_back(std::move(e));
    coords.push_back(k);
  }
  return coords;
}

std::vector<RVec> lattice_basis(const ValidatedStabilizer& stab, const std::vector<RVec>& u_basis,
                                const std::vector<std::size_t>& coords) {
  std::size_t n = stab.n();
  std::vector<RVec> projected;
  for (const auto& l : stab.spec().lattice_gens) projected.push_back(project_along(l, u_basis, coords, n));
  auto basis = lower_hermite_basis(projected, n);
  if (!linalg::independent(basis)) fail(ErrorCode::NonDiscrete, "lattice basis is not linearly independent");
  return basis;
}

ValidatedStabilizer validate_spec(const StabilizerSpec& spec) {
  for (const auto& u : spec.u_gens) check_dim(u, spec.n, "u generator");
  for (const auto& l : spec.lattice_gens) check_dim(l, spec.n, "lattice generator");

  ValidatedStabilizer out;
  out.spec_ = spec;
  out.u_basis_ = greedy_independent(spec.u_gens, {});
  out.coords_ = complementary_coords(out.u_basis_, spec.n);
  for (std::size_t i = 0; i < spec.lattice_gens.size(); ++i) {
    if (project_along(spec.lattice_gens[i], out.u_basis_, out.coords_, spec.n).is_zero())
      fail(ErrorCode::DependentLatticeGenerator,
           "lattice generator " + std::to_string(i) + " " + to_string(spec.lattice_gens[i]) +
               " lies in the subspace part");
  }
  out.v_basis_ = lattice_basis(out, out.u_basis_, out.coords_);
  return out;
}

bool member(const RVec& g, const ValidatedStabilizer& stab) {
  if (g.dim() != stab.n()) return false;
  RVec p = stab.project(g);
  if (p.is_zero()) return true;
  auto c = linalg::solve_combination(p, stab.v_basis());
  if (!c) return false;
  for (const auto& x : *c)
    if (x.get_den() != 1) return false;
  return true;
}

std::vector<RVec> largest_subspace_basis(const ValidatedStabilizer& stab) { return stab.u_basis(); }

std::vector<RVec> complement_basis(const std::vector<RVec>& u_basis, const std::vector<RVec>& v_basis,
                                   std::size_t n) {
  std::vector<RVec> spanning = u_basis;
  spanning.insert(spanning.end(), v_basis.begin(), v_basis.end());
  std::vector<std::size_t> chosen;
  for (std::size_t k = 0; k < n; ++k) {
    RVec e = RVec::unit(n, k);
    if (linalg::in_span(e, spanning)) continue;
    spanning.push_back(std::move(e));
    chosen.push_back(k);
  }
  return unit_vectors(chosen, n);
}

ValidatedStabilizer as_stabilizer(const CanonicalBasis& basis) {
  return validate_spec(StabilizerSpec{basis.n, basis.u, basis.v});
}

CanonicalBasis decompose(const StabilizerSpec& spec) {
  ValidatedStabilizer stab = validate_spec(spec);
  CanonicalBasis out;
  out.n = spec.n;
  out.u = largest_subspace_basis(stab);
  auto coords = complementary_coords(out.u, spec.n);
  out.v = lattice_basis(stab, out.u, coords);
  out.w = complement_basis(out.u, out.v, spec.n);

  std::vector<RVec> all = out.u;
  all.insert(all.end(), out.v.begin(), out.v.end());
  all.insert(all.end(), out.w.begin(), out.w.end());
  if (all.size() != spec.n || !linalg::independent(all))
    fail(ErrorCode::AuditFailed, "u, v, w do not form a basis of R^" + std::to_string(spec.n));

  ValidatedStabilizer rebuilt = as_stabilizer(out);
  for (const auto& g : spec.u_gens)
    if (!member(g, rebuilt)) fail(ErrorCode::AuditFailed, "u generator lost in decomposition: " + to_string(g));
  for (const auto& g : spec.lattice_gens)
    if (!member(g, rebuilt)) fail(ErrorCode::AuditFailed, "lattice generator lost in decomposition: " + to_string(g));
  for (const auto& g : out.u)
    if (!member(g, stab)) fail(ErrorCode::AuditFailed, "u vector outside the group: " + to_string(g));
  for (const auto& g : out.v)
    if (!member(g, stab)) fail(ErrorCode::AuditFailed, "v vector outside the group: " + to_string(g));
  return out;
}

QuotientType quotient_type(const CanonicalBasis& basis) { return {basis.beta(), basis.gamma()}; }

void to_json(json& j, const StabilizerSpec& s) {
  j = json{{"n", s.n}, {"u_gens", s.u_gens}, {"lattice_gens", s.lattice_gens}};
}

void from_json(const json& j, StabilizerSpec& s) {
  s.n = j.at("n").get<std::size_t>();
  s.u_gens = j.value("u_gens", json::array()).get<std::vector<RVec>>();
  s.lattice_gens = j.value("lattice_gens", json::array()).get<std::vector<RVec>>();
}

void to_json(json& j, const CanonicalBasis& b) {
  j = json{{"n", b.n},        {"u", b.u},          {"v", b.v},          {"w", b.w},
           {"alpha", b.alpha()}, {"beta", b.beta()}, {"gamma", b.gamma()}};
}

void from_json(const json& j, CanonicalBasis& b) {
  b.n = j.at("n").get<std::size_t>();
  b.u = j.at("u").get<std::vector<RVec>>();
  b.v = j.at("v").get<std::vector<RVec>>();
  b.w = j.at("w").get<std::vector<RVec>>();
  if (j.contains("alpha") && j.at("alpha").get<std::size_t>() != b.alpha())
    fail(ErrorCode::ParseError, "alpha does not match the number of u vectors");
  if (j.contains("beta") && j.at("beta").get<std::size_t>() != b.beta())
    fail(ErrorCode::ParseError, "beta does not match the number of v vectors");
  if (j.contains("gamma") && j.at("gamma").get<std::size_t>() != b.gamma())
    fail(ErrorCode::ParseError, "gamma does not match the number of w vectors");
}

}  // namespace orbitred
