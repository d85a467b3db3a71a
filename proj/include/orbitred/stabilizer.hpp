#pragma once

#include <vector>

#include "orbitred/codec.hpp"
#include "orbitred/vec.hpp"

namespace orbitred {

// Generator-level description of a closed subgroup G = U + Z-span(lattice)
// of R^n, where U is the real span of `u_gens`.
struct StabilizerSpec {
  std::size_t n = 0;
  std::vector<RVec> u_gens;
  std::vector<RVec> lattice_gens;
};

// Basis u, v, w of R^n with G = span_R(u) (+) span_Z(v) and
// R^n = span_R(G) (+) span_R(w). Each w_i is a standard unit vector.
struct CanonicalBasis {
  std::size_t n = 0;
  std::vector<RVec> u;
  std::vector<RVec> v;
  std::vector<RVec> w;

  std::size_t alpha() const noexcept { return u.size(); }
  std::size_t beta() const noexcept { return v.size(); }
  std::size_t gamma() const noexcept { return w.size(); }

  friend bool operator==(const CanonicalBasis&, const CanonicalBasis&) = default;
};

// Isomorphism type T^beta (+) R^gamma of R^n / G.
struct QuotientType {
  std::size_t beta = 0;
  std::size_t gamma = 0;
  friend bool operator==(const QuotientType&, const QuotientType&) = default;
  friend auto operator<=>(const QuotientType&, const QuotientType&) = default;
};

// A spec that passed validate_spec, together with the data membership needs.
class ValidatedStabilizer {
 public:
  const StabilizerSpec& spec() const noexcept { return spec_; }
  std::size_t n() const noexcept { return spec_.n; }
  const std::vector<RVec>& u_basis() const noexcept { return u_basis_; }
  const std::vector<std::size_t>& complement_coords() const noexcept { return coords_; }
  const std::vector<RVec>& v_basis() const noexcept { return v_basis_; }

  // Projection of g onto V = span{e_k : k in complement_coords} along U.
  RVec project(const RVec& g) const;

 private:
  friend ValidatedStabilizer validate_spec(const StabilizerSpec& spec);
  StabilizerSpec spec_;
  std::vector<RVec> u_basis_;
  std::vector<std::size_t> coords_;
  std::vector<RVec> v_basis_;
};

ValidatedStabilizer validate_spec(const StabilizerSpec& spec);

// Exact test g in U + Z-span(lattice_gens).
bool member(const RVec& g, const ValidatedStabilizer& stab);

// Generators scanned in input order, keeping each one outside the span of
// those kept so far.
std::vector<RVec> largest_subspace_basis(const ValidatedStabilizer& stab);

// Least-index greedy choice of coordinates (0-based) whose unit vectors
// complete `u_basis` to a basis of R^n.
std::vector<std::size_t> complementary_coords(const std::vector<RVec>& u_basis, std::size_t n);

// Z-basis of D = G ∩ V in lower Hermite form; the vectors supported on the
// first k coordinates are a Z-basis of D ∩ R^k.
std::vector<RVec> lattice_basis(const ValidatedStabilizer& stab, const std::vector<RVec>& u_basis,
                                const std::vector<std::size_t>& coords);

// Least-index unit vectors completing span(u ∪ v) to R^n.
std::vector<RVec> complement_basis(const std::vector<RVec>& u_basis, const std::vector<RVec>& v_basis,
                                   std::size_t n);

CanonicalBasis decompose(const StabilizerSpec& spec);

QuotientType quotient_type(const CanonicalBasis& basis);

// Description of span_R(u) (+) span_Z(v), suitable for member().
ValidatedStabilizer as_stabilizer(const CanonicalBasis& basis);

void to_json(json& j, const StabilizerSpec& s);
void from_json(const json& j, StabilizerSpec& s);
void to_json(json& j, const CanonicalBasis& b);
void from_json(const json& j, CanonicalBasis& b);

}  // namespace orbitred
