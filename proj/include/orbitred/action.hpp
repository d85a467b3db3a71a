#pragma once

#include <optional>
#include <vector>

#include "orbitred/codec.hpp"
#include "orbitred/group.hpp"
#include "orbitred/linalg.hpp"
#include "orbitred/stabilizer.hpp"

namespace orbitred {

// Translation action of T^a (+) R^b (+) Z^c on X = R^n / G. A group element
// with coordinates (t, r, z) moves x by M * (t, r, z), t taken in [0,1).
// Points are represented by any vector of their coset; canonicalize picks the
// representative. G = span(u) (+) Z-span(v) is the `stabilizer` basis, so the
// stabilizer of every point is {g : M * coords(g) in G}.
struct ModelAction {
  std::size_t a = 0;  // torus coordinates
  std::size_t b = 0;  // real coordinates
  std::size_t c = 0;  // integer coordinates
  std::size_t n = 0;  // point dimension
  linalg::Matrix m;   // n x (a + b + c)
  CanonicalBasis stabilizer;

  friend bool operator==(const ModelAction&, const ModelAction&) = default;
};

// Checks shapes, that the stabilizer basis spans R^n, and that every torus
// column lies in G (otherwise t and t + 1 would act differently).
void validate_model(const ModelAction& model);

// R^n acting on itself by translation, points taken modulo `stabilizer`.
ModelAction translation_model(const CanonicalBasis& stabilizer);

struct TorusState {
  RVec x;
  TorusVec t;
  friend bool operator==(const TorusState&, const TorusState&) = default;
};

RVec act(const ModelAction& model, const GroupElement& g, const RVec& x);
// Same, with the integer coordinates supplied explicitly.
RVec act(const ModelAction& model, const GroupElement& g, const std::vector<Integer>& z, const RVec& x);

// Coordinates of x in the (u, v, w) basis, concatenated in that order.
std::vector<Rational> basis_coordinates(const CanonicalBasis& basis, const RVec& x);

RVec canonicalize(const CanonicalBasis& basis, const RVec& x);

// x ~ y in the orbit relation of `model`.
bool same_orbit(const ModelAction& model, const RVec& x, const RVec& y);

// <u, v> . <x, t> = <act((u, floor(v + t)), x), frac(v + t)>; the model's torus
// part is left at zero and its integer coordinates receive the floors.
TorusState unwrap_act(const ModelAction& base, const RVec& u, const RVec& v, const TorusState& s);

TorusState embed_unwrap(const RVec& x, std::size_t fiber_dim);

// (t, r) . x = canonicalize(x + sum t_i v_i + sum r_i w_i). Needs a translation
// model over `basis`.
RVec free_quotient_act(const CanonicalBasis& basis, const ModelAction& model, const TorusVec& t, const RVec& r,
                       const RVec& x);
RVec free_quotient_act(const CanonicalBasis& basis, const TorusVec& t, const RVec& r, const RVec& x);

// The unique (t, r) with (t, r) . x = canonicalize(y).
GroupElement recover_free_element(const CanonicalBasis& basis, const RVec& x, const RVec& y);

// Product action on X x H, H = T^pad_beta (+) R^pad_gamma acting on itself.
// New torus coordinates come after the existing ones, likewise for real
// coordinates; the new point coordinates are appended after x.
ModelAction product_free_extension(const ModelAction& model, std::size_t pad_beta, std::size_t pad_gamma);

// The reduction x -> (x, e_H) recorded with product_free_extension.
RVec extension_embed(const ModelAction& extended, const RVec& x);

// Points of X = R^n x R^p with the free action of T^beta (+) R^gamma on the
// first factor (through the canonical basis) and the second factor invariant.
// An orbit is identified with the group through `chart`.
struct OrbitPoint {
  RVec key;              // transverse coordinates, constant on the orbit
  GroupElement offset;   // position inside the orbit
  friend bool operator==(const OrbitPoint&, const OrbitPoint&) = default;
};

class FreeQuotientModel {
 public:
  FreeQuotientModel(CanonicalBasis basis, std::size_t transverse_dim);

  const CanonicalBasis& basis() const noexcept { return basis_; }
  std::size_t transverse_dim() const noexcept { return p_; }
  std::size_t point_dim() const noexcept { return basis_.n + p_; }
  std::size_t beta() const noexcept { return basis_.beta(); }
  std::size_t gamma() const noexcept { return basis_.gamma(); }

  RVec canonical(const RVec& point) const;
  RVec act(const GroupElement& g, const RVec& point) const;
  OrbitPoint chart(const RVec& point) const;
  // Inverse of chart.
  RVec point(const OrbitPoint& p) const;
  bool same_orbit(const RVec& x, const RVec& y) const;

 private:
  CanonicalBasis basis_;
  std::size_t p_;
};

void to_json(json& j, const ModelAction& m);
void from_json(const json& j, ModelAction& m);
void to_json(json& j, const TorusState& s);
void from_json(const json& j, TorusState& s);
void to_json(json& j, const OrbitPoint& p);

}  // namespace orbitred
