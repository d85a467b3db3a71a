#include "orbitred/witness.hpp"

#include <algorithm>
#include <random>

#include "orbitred/seed.hpp"

namespace orbitred {

namespace {

RVec head(const RVec& x, std::size_t m) {
  return RVec(std::vector<Rational>(x.coords().begin(), x.coords().begin() + static_cast<std::ptrdiff_t>(m)));
}

RVec with_head(RVec x, const RVec& h) {
  for (std::size_t i = 0; i < h.dim(); ++i) x[i] = h[i];
  return x;
}

std::string join(const std::vector<Rational>& v) {
  std::string s;
  for (const auto& q : v) {
    s += to_string(q);
    s += ',';
  }
  return s;
}

// Grid cell indices of g meeting [box.lo, box.hi), per axis.
std::vector<std::vector<Integer>> cells_in(const ShiftedGrid& g, const Window& box) {
  std::vector<std::vector<Integer>> out(g.dim());
  auto first = g.cell_index(box.lo);
  for (std::size_t a = 0; a < g.dim(); ++a)
    for (Integer k = first[a]; g.face(a, k) < box.hi[a]; ++k) out[a].push_back(k);
  return out;
}

template <class F>
void for_each_cell(const std::vector<std::vector<Integer>>& ranges, F&& f) {
  for (const auto& r : ranges)
    if (r.empty()) return;
  std::vector<std::size_t> pos(ranges.size(), 0);
  std::vector<Integer> idx(ranges.size());
  for (;;) {
    for (std::size_t a = 0; a < ranges.size(); ++a) idx[a] = ranges[a][pos[a]];
    f(idx);
    std::size_t a = 0;
    while (a < ranges.size() && ++pos[a] == ranges[a].size()) pos[a++] = 0;
    if (a == ranges.size()) return;
  }
}

Window clip_box(const RVec& center, const Rational& half, const Window& w) {
  RVec lo(w.dim()), hi(w.dim());
  for (std::size_t a = 0; a < w.dim(); ++a) {
    lo[a] = std::max(w.lo[a], Rational(center[a] - half));
    hi[a] = std::min(w.hi[a], Rational(center[a] + half));
  }
  return Window(lo, hi);
}

// Worst-value accumulator for one inequality.
struct Tally {
  Inequality q;
  Tally(std::string clause, std::size_t i, std::size_t j, std::string rel, Rational rhs, bool enforced = true) {
    q.clause = std::move(clause);
    q.i = i;
    q.j = j;
    q.relation = std::move(rel);
    q.rhs = std::move(rhs);
    q.enforced = enforced;
  }
  void add(const Rational& v) {
    ++q.checks;
    bool lower = q.relation == ">" || q.relation == ">=";
    if (!q.lhs || (lower ? v < *q.lhs : v > *q.lhs)) q.lhs = v;
    bool good = q.relation == ">"    ? v > q.rhs
                : q.relation == ">=" ? v >= q.rhs
                : q.relation == "<=" ? v <= q.rhs
                                     : v < q.rhs;
    if (!good) ++q.violations;
  }
  void missing() {
    ++q.checks;
    ++q.violations;
  }
};

}  // namespace

bool Certificate::ok() const { return first_failure() == nullptr; }

const Inequality* Certificate::first_failure() const {
  for (const auto& q : items)
    if (q.enforced && !q.ok()) return &q;
  return nullptr;
}

Hierarchy::Hierarchy(Window window, Schedule schedule, std::uint64_t seed)
    : window_(std::move(window)), schedule_(std::move(schedule)), seed_(seed) {
  validate_schedule(schedule_);
  if (window_.dim() == 0) fail(ErrorCode::UnsupportedDimension, "hierarchy needs at least one real dimension");
  const Rational& dn = schedule_.scale(levels());
  for (std::size_t a = 0; a < dim(); ++a)
    if (window_.edge(a) < 4 * dn)
      fail(ErrorCode::PreconditionViolated, "window edge " + to_string(window_.edge(a)) + " is below 4 d_N = " +
                                                to_string(Rational(4 * dn)));
}

bool Hierarchy::in_safe_interior(const RVec& x) const {
  return x.dim() == dim() && window_.in_interior(x, schedule_.scale(levels()));
}

std::vector<Rational> Hierarchy::slice_of(std::size_t j, const RVec& x) const {
  return std::vector<Rational>(x.coords().begin() + static_cast<std::ptrdiff_t>(geometry_dim(j)), x.coords().end());
}

Window Hierarchy::slice_window(std::size_t j) const {
  std::size_t m = geometry_dim(j);
  return Window(head(window_.lo, m), head(window_.hi, m));
}

std::uint64_t Hierarchy::slice_seed(const char* what, std::size_t i, std::size_t j,
                                    const std::vector<Rational>& key) const {
  return mix_seed(seed_, std::string(what) + ":" + std::to_string(i) + ":" + std::to_string(j) + ":" + join(key));
}

const SquarePartition& Hierarchy::diagonal(std::size_t i, const RVec& x) const {
  if (i < 1 || i > levels()) fail(ErrorCode::PreconditionViolated, "level out of range");
  SliceKey key{i, i, slice_of(i, x)};
  auto it = diagonals_.find(key);
  if (it == diagonals_.end()) {
    auto part = build_square_partition(slice_window(i), schedule_.region_config(i, geometry_dim(i)),
                                       slice_seed("diag", i, i, std::get<2>(key)));
    it = diagonals_.emplace(key, std::make_unique<SquarePartition>(std::move(part))).first;
  }
  return *it->second;
}

const ShiftedGrid& Hierarchy::tilde(std::size_t i, std::size_t j, const RVec& x) const {
  if (j < 1 || j >= i || i > levels()) fail(ErrorCode::PreconditionViolated, "grid needs 1 <= j < i <= N");
  SliceKey key{i, j, slice_of(j, x)};
  auto it = grids_.find(key);
  if (it == grids_.end()) {
    std::vector<const ShiftedGrid*> existing;
    for (std::size_t k = j + 1; k < i; ++k) existing.push_back(&tilde(k, j, x));
    FaceOracle oracle = [existing](std::size_t axis, const Rational& lo, const Rational& hi) {
      std::vector<Rational> out;
      for (const auto* g : existing)
        for (const auto& k : g->faces_in(axis, lo, hi)) out.push_back(g->face(axis, k));
      std::sort(out.begin(), out.end());
      out.erase(std::unique(out.begin(), out.end()), out.end());
      return out;
    };
    std::size_t m = geometry_dim(j);
    auto grid = std::make_unique<ShiftedGrid>(grid_offset(m, schedule_.scale(j), slice_seed("grid", i, j, std::get<2>(key))),
                                              schedule_.scale(j), schedule_.separation(j), std::move(oracle));
    it = grids_.emplace(key, std::move(grid)).first;
  }
  return *it->second;
}

RVec Hierarchy::step(std::size_t i, std::size_t j, const RVec& x) const {
  const auto& g = tilde(i, j, x);
  return with_head(x, g.cell(g.cell_index(head(x, g.dim()))).center());
}

Hierarchy::ClassId Hierarchy::class_of(std::size_t i, std::size_t j, const RVec& x) const {
  if (j < 1 || j > i || i > levels()) fail(ErrorCode::PreconditionViolated, "class needs 1 <= j <= i <= N");
  if (x.dim() != dim()) fail(ErrorCode::DimensionMismatch, "point has the wrong dimension");
  RVec c = x;
  for (std::size_t l = j; l < i; ++l) c = step(i, l, c);
  const auto& sq = diagonal(i, c);
  return {slice_of(i, c), sq.locate(head(c, geometry_dim(i)))};
}

bool Hierarchy::related(std::size_t i, std::size_t j, const RVec& x, const RVec& y) const {
  return class_of(i, j, x) == class_of(i, j, y);
}

Rect Hierarchy::class_rect(std::size_t i, const RVec& x) const {
  auto id = class_of(i, 1, x);
  RVec slice_point = x;
  for (std::size_t a = geometry_dim(i); a < dim(); ++a) slice_point[a] = id.slice[a - geometry_dim(i)];
  return diagonal(i, slice_point).piece_rect(id.piece);
}

RVec Hierarchy::center(std::size_t i, const RVec& x) const { return with_head(x, class_rect(i, x).center()); }

RegionPartition Hierarchy::materialize(std::size_t i, std::size_t j, const RVec& x, const Window& box) const {
  std::size_t m = geometry_dim(j);
  if (box.dim() != m) fail(ErrorCode::DimensionMismatch, "box must have the slice dimension");
  RegionPartition out;
  out.window = box;
  std::vector<ClassId> classes;
  auto region_of = [&](const ClassId& c) {
    auto it = std::find(classes.begin(), classes.end(), c);
    if (it != classes.end()) return static_cast<std::size_t>(it - classes.begin());
    classes.push_back(c);
    return classes.size() - 1;
  };
  auto push = [&](const Rect& r, std::size_t region) {
    auto clipped = r.clip(box);
    if (!clipped) return;
    clipped->id = out.rects.size();
    out.rects.push_back(*clipped);
    out.region.push_back(region);
  };
  if (j == i) {
    const auto& sq = diagonal(i, x);
    std::vector<std::vector<Rational>> cuts(m);
    for (std::size_t a = 0; a < m; ++a) {
      cuts[a] = sq.face_coords(a, box.lo[a], box.hi[a]);
      cuts[a].push_back(box.lo[a]);
      cuts[a].push_back(box.hi[a]);
      std::sort(cuts[a].begin(), cuts[a].end());
      cuts[a].erase(std::unique(cuts[a].begin(), cuts[a].end()), cuts[a].end());
    }
    std::vector<std::vector<Integer>> ranges(m);
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t k = 0; k + 1 < cuts[a].size(); ++k) ranges[a].push_back(Integer(static_cast<long>(k)));
    std::vector<SquarePartition::Piece> seen;
    for_each_cell(ranges, [&](const std::vector<Integer>& idx) {
      RVec mid(m);
      for (std::size_t a = 0; a < m; ++a) {
        std::size_t k = idx[a].get_ui();
        mid[a] = (cuts[a][k] + cuts[a][k + 1]) / 2;
      }
      auto piece = sq.locate(mid);
      if (std::find(seen.begin(), seen.end(), piece) != seen.end()) return;
      seen.push_back(piece);
      push(sq.piece_rect(piece), region_of({slice_of(i, x), piece}));
    });
  } else {
    const auto& g = tilde(i, j, x);
    for_each_cell(cells_in(g, box), [&](const std::vector<Integer>& idx) {
      Rect cell = g.cell(idx);
      push(cell, region_of(class_of(i, j + 1, with_head(x, cell.center()))));
    });
  }
  return out;
}

Certificate Hierarchy::certify(const std::vector<RVec>& points, AuditLevel level) const {
  const std::size_t n = levels();
  const Rational diag_half = level == AuditLevel::Full ? 6 : 3;
  const Rational grid_half = level == AuditLevel::Full ? 60 : 25;
  std::vector<Tally> tallies;
  auto tally = [&](std::string clause, std::size_t i, std::size_t j, std::string rel, Rational rhs,
                   bool enforced = true) -> Tally& {
    for (auto& t : tallies)
      if (t.q.clause == clause && t.q.i == i && t.q.j == j) return t;
    tallies.emplace_back(std::move(clause), i, j, std::move(rel), std::move(rhs), enforced);
    return tallies.back();
  };

  for (std::size_t k = 2; k <= n; ++k) tally("schedule", k, 0, ">", schedule_.required_separation(k)).add(schedule_.separation(k));

  for (const auto& x : points) {
    if (!window_.contains(x)) fail(ErrorCode::PreconditionViolated, "audit point outside the window");
    for (std::size_t i = 1; i <= n; ++i) {
      const Rational& di = schedule_.scale(i);
      const auto& sq = diagonal(i, x);
      // Face gaps of the adjusted cube arrangement.
      auto& c1 = tally("face_gaps", i, i, ">=", sq.config().D);
      if (sq.face_gaps().min_gap) c1.add(*sq.face_gaps().min_gap);
      c1.q.violations += sq.face_gaps().violations;
      // (ii): diagonal pieces fully inside the audit box.
      auto dbox = clip_box(head(x, geometry_dim(i)), diag_half * di, slice_window(i));
      auto edges = audit_edges(materialize(i, i, x, dbox), di, di + schedule_.epsilon, false);
      auto& lo = tally("ii:min_edge", i, i, ">=", di);
      auto& hi = tally("ii:max_edge", i, i, "<", di + schedule_.epsilon);
      if (edges.min_edge) lo.add(*edges.min_edge);
      if (edges.max_edge) hi.add(*edges.max_edge);

      for (std::size_t j = 1; j < i; ++j) {
        const Rational& dj = schedule_.scale(j);
        const Rational& sj = schedule_.separation(j);
        std::size_t m = geometry_dim(j);
        const auto& g = tilde(i, j, x);
        auto box = clip_box(head(x, m), grid_half * dj, slice_window(j));
        auto ranges = cells_in(g, box);

        // (iii) and conclusion (i): R~ cells, hence R[i][j] rects, in [9 d_j, 12 d_j].
        auto& emin = tally("iii:min_edge", i, j, ">=", 9 * dj);
        auto& emax = tally("iii:max_edge", i, j, "<=", 12 * dj);
        for_each_cell(ranges, [&](const std::vector<Integer>& idx) {
          Rect c = g.cell(idx);
          for (std::size_t a = 0; a < m; ++a) {
            emin.add(c.edge(a));
            emax.add(c.edge(a));
          }
        });

        // (iv) and conclusion (ii): a face between adjacent cells of different
        // R[i][j] classes is within 12 d_j of an R[i][j+1] face lying between
        // the two cell centres.
        auto& near = tally("iv:face_distance", i, j, "<=", 12 * dj);
        std::map<std::vector<Integer>, ClassId> memo;
        auto cls = [&](const std::vector<Integer>& idx) -> const ClassId& {
          auto it = memo.find(idx);
          if (it == memo.end())
            it = memo.emplace(idx, class_of(i, j + 1, with_head(x, g.cell(idx).center()))).first;
          return it->second;
        };
        for_each_cell(ranges, [&](const std::vector<Integer>& idx) {
          for (std::size_t a = 0; a < m; ++a) {
            auto next = idx;
            next[a] += 1;
            if (g.face(a, next[a]) >= box.hi[a]) continue;
            if (cls(idx) == cls(next)) continue;
            RVec ca = with_head(x, g.cell(idx).center());
            Rational cb = g.cell(next).center()[a];
            Rational shared = g.face(a, next[a]);
            std::vector<Rational> faces;
            if (j + 1 == i) {
              faces = diagonal(i, ca).face_coords(a, ca[a], cb);
            } else {
              const auto& up = tilde(i, j + 1, ca);
              for (const auto& k : up.faces_in(a, ca[a], cb)) faces.push_back(up.face(a, k));
            }
            if (faces.empty()) {
              near.missing();
              continue;
            }
            Rational best = abs_of(faces.front() - shared);
            for (const auto& f : faces) best = std::min(best, abs_of(f - shared));
            near.add(best);
          }
        });

        // (v): partitions R[k][j], j < k < i, with a face in the ball. The
        // ball radius 100000 16^j d_j exceeds any desk-scale window, so the
        // ball is the whole slice and every such grid contributes. Reported,
        // not enforced.
        tally("v:face_density", i, j, "<=", Rational(static_cast<long>(j + 1)), false)
            .add(Rational(static_cast<long>(i - 1 - j)));

        // (vi): parallel faces of R[k1][j], R[k2][j], j < k1 < k2 <= i, more
        // than s_j apart. Grid faces contain the region faces.
        auto& sep = tally("vi:separation", i, j, ">", sj);
        for (std::size_t k = j + 1; k < i; ++k) {
          const auto& other = tilde(k, j, x);
          for (std::size_t a = 0; a < m; ++a) {
            auto mine = g.faces_in(a, box.lo[a], box.hi[a]);
            auto theirs = other.faces_in(a, box.lo[a] - dj, box.hi[a] + dj);
            for (const auto& p : mine)
              for (const auto& q : theirs) sep.add(abs_of(g.face(a, p) - other.face(a, q)));
          }
        }
      }
    }
  }
  Certificate c;
  for (auto& t : tallies) c.items.push_back(std::move(t.q));
  return c;
}

BuiltHierarchy build_hierarchy(const Window& window, const Schedule& schedule, std::uint64_t seed, AuditLevel level) {
  Hierarchy h(window, schedule, seed);
  std::vector<RVec> points;
  RVec mid(window.dim());
  for (std::size_t a = 0; a < window.dim(); ++a) mid[a] = (window.lo[a] + window.hi[a]) / 2;
  points.push_back(mid);
  std::mt19937_64 rng(mix_seed(seed, "audit-points"));
  const Rational& margin = schedule.scale(schedule.levels());
  std::size_t extra = level == AuditLevel::Full ? 7 : 1;
  for (std::size_t p = 0; p < extra; ++p) {
    RVec x(window.dim());
    for (std::size_t a = 0; a < window.dim(); ++a)
      x[a] = window.lo[a] + margin +
             (window.edge(a) - 2 * margin) * make_rational(static_cast<long>(rng() >> 40), 1L << 24);
    points.push_back(x);
  }
  auto cert = h.certify(points, level);
  if (const auto* bad = cert.first_failure())
    fail(ErrorCode::AuditFailed, "hierarchy clause " + bad->clause + " failed at level (" + std::to_string(bad->i) +
                                     ", " + std::to_string(bad->j) + "): " + std::to_string(bad->violations) +
                                     " violations");
  return {std::move(h), std::move(cert)};
}

RVec center_of_region(const RegionPartition& p, std::size_t region, std::size_t torus_dim) {
  std::optional<Rect> box;
  Rational volume = 0;
  for (std::size_t k = 0; k < p.rects.size(); ++k) {
    if (p.region[k] != region) continue;
    const Rect& r = p.rects[k];
    volume += r.volume();
    if (!box) {
      box = r;
      continue;
    }
    for (std::size_t a = 0; a < r.dim(); ++a) {
      box->lo[a] = std::min(box->lo[a], r.lo[a]);
      box->hi[a] = std::max(box->hi[a], r.hi[a]);
    }
  }
  if (!box) fail(ErrorCode::PreconditionViolated, "no region " + std::to_string(region));
  // Rects of a region are disjoint, so they fill their bounding box exactly
  // when the volumes agree.
  if (box->volume() != volume) fail(ErrorCode::RegionNotRect, "region " + std::to_string(region) + " is not a rect");
  RVec c(torus_dim + box->dim());
  RVec mid = box->center();
  for (std::size_t a = 0; a < mid.dim(); ++a) c[torus_dim + a] = mid[a];
  return c;
}

namespace {
void put_gamma(std::string& bits, const Integer& v) {
  std::string b = v.get_str(2);
  bits.append(b.size() - 1, '0');
  bits += b;
}

Integer get_gamma(const std::string& bits, std::size_t& pos) {
  std::size_t zeros = 0;
  while (pos < bits.size() && bits[pos] == '0') ++zeros, ++pos;
  if (pos + zeros + 1 > bits.size()) fail(ErrorCode::ParseError, "truncated code");
  Integer v(bits.substr(pos, zeros + 1), 2);
  pos += zeros + 1;
  return v;
}
}  // namespace

Rational encode_rationals(const std::vector<Rational>& values) {
  std::string bits;
  for (const auto& q : values) {
    bits += sgn(q) < 0 ? '1' : '0';
    put_gamma(bits, Integer(abs(q.get_num()) + 1));
    put_gamma(bits, q.get_den());
  }
  bits += '1';
  Integer num(bits, 2);
  Integer den = 1;
  mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), bits.size());
  return make_rational(num, den);
}

std::vector<Rational> decode_rationals(const Rational& code) {
  const Integer& den = code.get_den();
  if (sgn(code) <= 0 || code >= 1 || mpz_popcount(den.get_mpz_t()) != 1)
    fail(ErrorCode::ParseError, "not a dyadic code in (0, 1)");
  std::size_t len = mpz_sizeinbase(den.get_mpz_t(), 2) - 1;
  std::string bits = code.get_num().get_str(2);
  bits.insert(0, len - bits.size(), '0');
  bits.pop_back();  // terminator
  std::vector<Rational> out;
  std::size_t pos = 0;
  while (pos < bits.size()) {
    bool negative = bits[pos++] == '1';
    Integer num = get_gamma(bits, pos) - 1;
    Integer d = get_gamma(bits, pos);
    Rational q = make_rational(negative ? Integer(-num) : num, d);
    if (q.get_num() != (negative ? Integer(-num) : num)) fail(ErrorCode::ParseError, "non-canonical code");
    out.push_back(q);
  }
  return out;
}

namespace {
Rational encode_point(const OrbitPoint& p) {
  std::vector<Rational> v{Rational(static_cast<long>(p.key.dim())), Rational(static_cast<long>(p.offset.torus.dim()))};
  for (const auto& c : p.key.coords()) v.push_back(c);
  for (const auto& c : p.offset.torus.coords()) v.push_back(c);
  for (const auto& c : p.offset.real.coords()) v.push_back(c);
  return encode_rationals(v);
}

TorusVec select_torus(const TorusVec& t, std::size_t n) {
  std::vector<Rational> c(t.coords().begin(), t.coords().end());
  for (std::size_t a = 0; a < std::min(n, c.size()); ++a) c[a] = 0;
  return TorusVec(std::move(c));
}
}  // namespace

ReductionTrace trace(const OrbitPoint& x, const Hierarchy& h, std::string point_id) {
  if (x.offset.real.dim() != h.dim()) fail(ErrorCode::DimensionMismatch, "point and hierarchy dimensions differ");
  if (!h.in_safe_interior(x.offset.real))
    fail(ErrorCode::PointOutsideSafeInterior, "point is within d_N of the window boundary");
  ReductionTrace t;
  t.point_id = std::move(point_id);
  for (std::size_t n = 1; n <= h.levels(); ++n) {
    OrbitPoint phi{x.key, GroupElement{select_torus(x.offset.torus, n), h.center(n, x.offset.real)}};
    t.encoded.push_back(encode_point(phi));
    t.phi.push_back(std::move(phi));
  }
  return t;
}

std::optional<std::size_t> eventual_agreement(const ReductionTrace& a, const ReductionTrace& b) {
  if (a.encoded.size() != b.encoded.size())
    fail(ErrorCode::LengthMismatch, "traces have lengths " + std::to_string(a.encoded.size()) + " and " +
                                        std::to_string(b.encoded.size()));
  std::size_t n = a.encoded.size();
  while (n > 0 && a.encoded[n - 1] == b.encoded[n - 1]) --n;
  if (n == a.encoded.size() && n > 0) return std::nullopt;
  return n + 1;
}

ReductionTrace tag_trace(const ReductionTrace& t, const ClassLabel& label) {
  ReductionTrace out = t;
  for (auto& e : out.encoded)
    e = encode_rationals({Rational(static_cast<long>(label.beta)), Rational(static_cast<long>(label.gamma)), e});
  return out;
}

WitnessPipeline::WitnessPipeline(FreeQuotientModel model, Window window, Schedule schedule, std::uint64_t seed,
                                 AuditLevel audit)
    : model_(std::move(model)), window_(std::move(window)), schedule_(std::move(schedule)), seed_(seed), audit_(audit) {
  validate_schedule(schedule_);
  if (window_.dim() != model_.gamma())
    fail(ErrorCode::DimensionMismatch, "window dimension " + std::to_string(window_.dim()) + " differs from gamma " +
                                           std::to_string(model_.gamma()));
}

static const BuiltHierarchy& built_for(std::map<std::vector<Rational>, std::unique_ptr<BuiltHierarchy>>& orbits,
                                const RVec& key, const Window& w, const Schedule& s, std::uint64_t seed,
                                AuditLevel level) {
  std::vector<Rational> k(key.coords().begin(), key.coords().end());
  auto it = orbits.find(k);
  if (it == orbits.end())
    it = orbits
             .emplace(k, std::make_unique<BuiltHierarchy>(
                             build_hierarchy(w, s, mix_seed(seed, "orbit:" + join(k)), level)))
             .first;
  return *it->second;
}

const Hierarchy& WitnessPipeline::hierarchy_for(const RVec& key) const {
  if (model_.gamma() == 0) fail(ErrorCode::UnsupportedDimension, "orbits without real directions need no hierarchy");
  return built_for(orbits_, key, window_, schedule_, seed_, audit_).hierarchy;
}

const Certificate& WitnessPipeline::certificate_for(const RVec& key) const {
  if (model_.gamma() == 0) fail(ErrorCode::UnsupportedDimension, "orbits without real directions need no hierarchy");
  return built_for(orbits_, key, window_, schedule_, seed_, audit_).certificate;
}

ReductionTrace WitnessPipeline::trace(const RVec& point, std::string point_id) const {
  OrbitPoint p = model_.chart(point);
  if (model_.gamma() == 0) {
    // Compact orbits: the selector alone picks the point.
    ReductionTrace t;
    t.point_id = std::move(point_id);
    for (std::size_t n = 1; n <= schedule_.levels(); ++n) {
      OrbitPoint phi{p.key, GroupElement{select_torus(p.offset.torus, n), RVec()}};
      t.encoded.push_back(encode_point(phi));
      t.phi.push_back(std::move(phi));
    }
    return t;
  }
  return orbitred::trace(p, hierarchy_for(p.key), std::move(point_id));
}

void to_json(json& j, const Inequality& q) {
  j = json{{"clause", q.clause},
           {"i", q.i},
           {"j", q.j},
           {"relation", q.relation},
           {"lhs", q.lhs ? json(*q.lhs) : json(nullptr)},
           {"rhs", q.rhs},
           {"checks", q.checks},
           {"violations", q.violations},
           {"enforced", q.enforced},
           {"ok", q.ok()}};
}

void to_json(json& j, const Certificate& c) { j = json{{"ok", c.ok()}, {"items", c.items}}; }

void to_json(json& j, const ReductionTrace& t) {
  j = json{{"point_id", t.point_id}, {"phi", t.phi}, {"encoded", t.encoded}};
}

void to_json(json& j, const ClassLabel& l) { j = json{{"beta", l.beta}, {"gamma", l.gamma}}; }

}  // namespace orbitred
