#include "orbitred/action.hpp"

#include <string>

#include "orbitred/error.hpp"

namespace orbitred {

namespace {

void require_dim(std::size_t got, std::size_t want, const char* what) {
  if (got != want)
    fail(ErrorCode::DimensionMismatch,
         std::string(what) + ": got dimension " + std::to_string(got) + ", expected " + std::to_string(want));
}

std::vector<RVec> basis_vectors(const CanonicalBasis& basis) {
  std::vector<RVec> all = basis.u;
  all.insert(all.end(), basis.v.begin(), basis.v.end());
  all.insert(all.end(), basis.w.begin(), basis.w.end());
  return all;
}

}  // namespace

void validate_model(const ModelAction& model) {
  require_dim(model.m.rows, model.n, "model matrix rows");
  require_dim(model.m.cols, model.a + model.b + model.c, "model matrix columns");
  require_dim(model.stabilizer.n, model.n, "model stabilizer");
  auto all = basis_vectors(model.stabilizer);
  if (all.size() != model.n || !linalg::independent(all))
    fail(ErrorCode::SingularBasis, "stabilizer basis of the model does not span R^" + std::to_string(model.n));
  auto stab = as_stabilizer(model.stabilizer);
  for (std::size_t k = 0; k < model.a; ++k)
    if (!member(model.m.column(k), stab))
      fail(ErrorCode::PreconditionViolated,
           "torus column " + std::to_string(k) + " is not in the stabilizer, so the torus action is ill-defined");
}

ModelAction translation_model(const CanonicalBasis& stabilizer) {
  ModelAction m;
  m.b = stabilizer.n;
  m.n = stabilizer.n;
  m.m = linalg::Matrix(m.n, m.n);
  for (std::size_t i = 0; i < m.n; ++i) m.m(i, i) = 1;
  m.stabilizer = stabilizer;
  return m;
}

RVec act(const ModelAction& model, const GroupElement& g, const std::vector<Integer>& z, const RVec& x) {
  require_dim(g.torus.dim(), model.a, "torus part of group element");
  require_dim(g.real.dim(), model.b, "real part of group element");
  require_dim(z.size(), model.c, "integer part of group element");
  require_dim(x.dim(), model.n, "point");
  std::vector<Rational> coords;
  coords.reserve(model.a + model.b + model.c);
  for (const auto& t : g.torus.coords()) coords.push_back(t);
  for (const auto& r : g.real.coords()) coords.push_back(r);
  for (const auto& k : z) coords.emplace_back(k);
  return x + model.m.apply(coords);
}

RVec act(const ModelAction& model, const GroupElement& g, const RVec& x) {
  return act(model, g, std::vector<Integer>(model.c), x);
}

std::vector<Rational> basis_coordinates(const CanonicalBasis& basis, const RVec& x) {
  require_dim(x.dim(), basis.n, "point");
  auto all = basis_vectors(basis);
  if (all.size() != basis.n) fail(ErrorCode::SingularBasis, "u, v, w do not have n vectors");
  auto c = linalg::solve_combination(x, all);
  if (!c || !linalg::independent(all)) fail(ErrorCode::SingularBasis, "u, v, w do not span R^n");
  return *c;
}

RVec canonicalize(const CanonicalBasis& basis, const RVec& x) {
  auto c = basis_coordinates(basis, x);
  std::size_t alpha = basis.alpha(), beta = basis.beta();
  RVec out(basis.n);
  for (std::size_t i = 0; i < beta; ++i) out += frac(c[alpha + i]) * basis.v[i];
  for (std::size_t i = 0; i < basis.gamma(); ++i) out += c[alpha + beta + i] * basis.w[i];
  return out;
}

bool same_orbit(const ModelAction& model, const RVec& x, const RVec& y) {
  require_dim(x.dim(), model.n, "point");
  require_dim(y.dim(), model.n, "point");
  // Orbit of x is x + G + span(torus and real columns) + Z-span(integer columns).
  StabilizerSpec spec{model.n, model.stabilizer.u, {}};
  for (std::size_t k = 0; k < model.a + model.b; ++k) spec.u_gens.push_back(model.m.column(k));
  auto sub = validate_spec(spec);
  std::vector<RVec> lattice = model.stabilizer.v;
  for (std::size_t k = model.a + model.b; k < model.m.cols; ++k) lattice.push_back(model.m.column(k));
  for (const auto& l : lattice)
    if (!sub.project(l).is_zero()) spec.lattice_gens.push_back(l);
  return member(y - x, validate_spec(spec));
}

TorusState unwrap_act(const ModelAction& base, const RVec& u, const RVec& v, const TorusState& s) {
  require_dim(v.dim(), s.t.dim(), "unwrap fiber");
  require_dim(v.dim(), base.c, "unwrap fiber against model integer coordinates");
  std::vector<Integer> floors(v.dim());
  std::vector<Rational> fiber(v.dim());
  for (std::size_t i = 0; i < v.dim(); ++i) {
    Rational sum = v[i] + s.t[i];
    floors[i] = floor_of(sum);
    fiber[i] = sum - Rational(floors[i]);
  }
  GroupElement g{TorusVec(base.a), u};
  return {act(base, g, floors, s.x), TorusVec(std::move(fiber))};
}

TorusState embed_unwrap(const RVec& x, std::size_t fiber_dim) { return {x, TorusVec(fiber_dim)}; }

RVec free_quotient_act(const CanonicalBasis& basis, const TorusVec& t, const RVec& r, const RVec& x) {
  require_dim(t.dim(), basis.beta(), "torus part");
  require_dim(r.dim(), basis.gamma(), "real part");
  require_dim(x.dim(), basis.n, "point");
  RVec y = x;
  for (std::size_t i = 0; i < t.dim(); ++i) y += t[i] * basis.v[i];
  for (std::size_t i = 0; i < r.dim(); ++i) y += r[i] * basis.w[i];
  return canonicalize(basis, y);
}

RVec free_quotient_act(const CanonicalBasis& basis, const ModelAction& model, const TorusVec& t, const RVec& r,
                       const RVec& x) {
  bool translation = model.a == 0 && model.b == basis.n && model.n == basis.n && model.stabilizer == basis;
  for (std::size_t i = 0; translation && i < model.n; ++i)
    for (std::size_t k = 0; k < model.b; ++k)
      if (model.m(i, k) != (i == k ? 1 : 0)) translation = false;
  if (!translation)
    fail(ErrorCode::PreconditionViolated, "free_quotient_act needs the translation model of its basis");
  return free_quotient_act(basis, t, r, x);
}

GroupElement recover_free_element(const CanonicalBasis& basis, const RVec& x, const RVec& y) {
  auto c = basis_coordinates(basis, y - x);
  std::size_t alpha = basis.alpha(), beta = basis.beta();
  std::vector<Rational> t(c.begin() + static_cast<std::ptrdiff_t>(alpha),
                          c.begin() + static_cast<std::ptrdiff_t>(alpha + beta));
  std::vector<Rational> r(c.begin() + static_cast<std::ptrdiff_t>(alpha + beta), c.end());
  return {TorusVec(std::move(t)), RVec(std::move(r))};
}

ModelAction product_free_extension(const ModelAction& model, std::size_t pad_beta, std::size_t pad_gamma) {
  if (pad_beta == 0 && pad_gamma == 0) return model;
  std::size_t pad = pad_beta + pad_gamma;
  ModelAction out;
  out.a = model.a + pad_beta;
  out.b = model.b + pad_gamma;
  out.c = model.c;
  out.n = model.n + pad;
  out.m = linalg::Matrix(out.n, out.a + out.b + out.c);
  // Old column k -> new column index.
  auto remap = [&](std::size_t k) {
    if (k < model.a) return k;
    if (k < model.a + model.b) return k + pad_beta;
    return k + pad;
  };
  for (std::size_t i = 0; i < model.n; ++i)
    for (std::size_t k = 0; k < model.m.cols; ++k) out.m(i, remap(k)) = model.m(i, k);
  for (std::size_t j = 0; j < pad_beta; ++j) out.m(model.n + j, model.a + j) = 1;
  for (std::size_t j = 0; j < pad_gamma; ++j) out.m(model.n + pad_beta + j, model.a + pad_beta + model.b + j) = 1;

  auto lift = [&](const RVec& v) { return v.padded(out.n); };
  out.stabilizer.n = out.n;
  for (const auto& u : model.stabilizer.u) out.stabilizer.u.push_back(lift(u));
  for (const auto& v : model.stabilizer.v) out.stabilizer.v.push_back(lift(v));
  for (std::size_t j = 0; j < pad_beta; ++j) out.stabilizer.v.push_back(RVec::unit(out.n, model.n + j));
  for (const auto& w : model.stabilizer.w) out.stabilizer.w.push_back(lift(w));
  for (std::size_t j = 0; j < pad_gamma; ++j) out.stabilizer.w.push_back(RVec::unit(out.n, model.n + pad_beta + j));
  return out;
}

RVec extension_embed(const ModelAction& extended, const RVec& x) {
  if (x.dim() > extended.n) fail(ErrorCode::DimensionMismatch, "point longer than the extended model");
  return x.padded(extended.n);
}

FreeQuotientModel::FreeQuotientModel(CanonicalBasis basis, std::size_t transverse_dim)
    : basis_(std::move(basis)), p_(transverse_dim) {
  auto all = basis_vectors(basis_);
  if (all.size() != basis_.n || !linalg::independent(all))
    fail(ErrorCode::SingularBasis, "canonical basis does not span R^" + std::to_string(basis_.n));
}

namespace {
RVec head(const RVec& v, std::size_t n) { return RVec(std::vector<Rational>(v.coords().begin(), v.coords().begin() + static_cast<std::ptrdiff_t>(n))); }
RVec tail(const RVec& v, std::size_t n) { return RVec(std::vector<Rational>(v.coords().begin() + static_cast<std::ptrdiff_t>(n), v.coords().end())); }
RVec concat(const RVec& a, const RVec& b) {
  std::vector<Rational> out(a.coords().begin(), a.coords().end());
  out.insert(out.end(), b.coords().begin(), b.coords().end());
  return RVec(std::move(out));
}
}  // namespace

RVec FreeQuotientModel::canonical(const RVec& point) const {
  require_dim(point.dim(), point_dim(), "point");
  return concat(canonicalize(basis_, head(point, basis_.n)), tail(point, basis_.n));
}

RVec FreeQuotientModel::act(const GroupElement& g, const RVec& point) const {
  require_dim(point.dim(), point_dim(), "point");
  return concat(free_quotient_act(basis_, g.torus, g.real, head(point, basis_.n)), tail(point, basis_.n));
}

OrbitPoint FreeQuotientModel::chart(const RVec& point) const {
  require_dim(point.dim(), point_dim(), "point");
  auto c = basis_coordinates(basis_, head(point, basis_.n));
  std::size_t alpha = basis_.alpha(), beta = basis_.beta();
  std::vector<Rational> t(c.begin() + static_cast<std::ptrdiff_t>(alpha),
                          c.begin() + static_cast<std::ptrdiff_t>(alpha + beta));
  std::vector<Rational> r(c.begin() + static_cast<std::ptrdiff_t>(alpha + beta), c.end());
  return {tail(point, basis_.n), {TorusVec(std::move(t)), RVec(std::move(r))}};
}

RVec FreeQuotientModel::point(const OrbitPoint& p) const {
  require_dim(p.key.dim(), p_, "orbit key");
  RVec x(basis_.n);
  return concat(free_quotient_act(basis_, p.offset.torus, p.offset.real, x), p.key);
}

bool FreeQuotientModel::same_orbit(const RVec& x, const RVec& y) const {
  require_dim(x.dim(), point_dim(), "point");
  require_dim(y.dim(), point_dim(), "point");
  return tail(x, basis_.n) == tail(y, basis_.n);
}

void to_json(json& j, const ModelAction& m) {
  j = json{{"a", m.a}, {"b", m.b}, {"c", m.c}, {"n", m.n}, {"matrix", m.m}, {"stabilizer", m.stabilizer}};
}

void from_json(const json& j, ModelAction& m) {
  m.a = j.value("a", std::size_t{0});
  m.b = j.value("b", std::size_t{0});
  m.c = j.value("c", std::size_t{0});
  m.n = j.at("n").get<std::size_t>();
  m.m = j.at("matrix").get<linalg::Matrix>();
  if (m.m.rows == 0) m.m = linalg::Matrix(m.n, m.a + m.b + m.c);
  m.stabilizer = j.at("stabilizer").get<CanonicalBasis>();
  validate_model(m);
}

void to_json(json& j, const TorusState& s) { j = json{{"x", s.x}, {"t", s.t}}; }

void from_json(const json& j, TorusState& s) {
  s.x = j.at("x").get<RVec>();
  s.t = j.at("t").get<TorusVec>();
}

void to_json(json& j, const OrbitPoint& p) { j = json{{"key", p.key}, {"offset", p.offset}}; }

}  // namespace orbitred
