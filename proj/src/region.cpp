#include "orbitred/region.hpp"

#include <algorithm>
#include <memory>
#include <random>
#include <string>

#include "orbitred/error.hpp"
#include "orbitred/seed.hpp"

namespace orbitred {

namespace {

std::vector<Rational> sorted_unique(std::vector<Rational> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::size_t index_of(const std::vector<Rational>& sorted, const Rational& x) {
  return static_cast<std::size_t>(std::lower_bound(sorted.begin(), sorted.end(), x) - sorted.begin());
}

// Visits every multi-index in the box [0, sizes), first axis fastest.
template <typename F>
void for_each_index(const std::vector<std::size_t>& sizes, F&& visit) {
  for (auto s : sizes)
    if (s == 0) return;
  std::vector<std::size_t> idx(sizes.size(), 0);
  for (;;) {
    visit(idx);
    std::size_t i = 0;
    while (i < sizes.size() && ++idx[i] == sizes[i]) idx[i++] = 0;
    if (i == sizes.size()) return;
  }
}

}  // namespace

bool Rect::contains(const RVec& x) const {
  if (x.dim() != dim()) return false;
  for (std::size_t i = 0; i < dim(); ++i)
    if (x[i] < lo[i] || x[i] >= hi[i]) return false;
  return true;
}

bool Rect::intersects(const Rect& o) const {
  for (std::size_t i = 0; i < dim(); ++i)
    if (!(lo[i] < o.hi[i] && o.lo[i] < hi[i])) return false;
  return true;
}

bool Rect::inside(const Window& w) const {
  for (std::size_t i = 0; i < dim(); ++i)
    if (lo[i] < w.lo[i] || hi[i] > w.hi[i]) return false;
  return true;
}

RVec Rect::center() const {
  RVec c(dim());
  for (std::size_t i = 0; i < dim(); ++i) c[i] = (lo[i] + hi[i]) / 2;
  return c;
}

Rational Rect::volume() const {
  Rational v = 1;
  for (std::size_t i = 0; i < dim(); ++i) v *= edge(i);
  return v;
}

std::optional<Rect> Rect::clip(const Window& w) const {
  Rect r = *this;
  for (std::size_t i = 0; i < dim(); ++i) {
    if (w.lo[i] > r.lo[i]) r.lo[i] = w.lo[i];
    if (w.hi[i] < r.hi[i]) r.hi[i] = w.hi[i];
    if (!(r.lo[i] < r.hi[i])) return std::nullopt;
  }
  return r;
}

bool Polyhedron::contains(const RVec& x) const {
  return std::any_of(rects.begin(), rects.end(), [&](const Rect& r) { return r.contains(x); });
}

namespace {

// Occupancy of the grid spanned by the rects' own coordinates.
struct OccupancyGrid {
  std::vector<std::vector<Rational>> breaks;
  std::vector<std::size_t> sizes;  // cells per axis
  std::vector<char> filled;

  std::size_t flat(const std::vector<std::size_t>& idx) const {
    std::size_t f = 0;
    for (std::size_t i = idx.size(); i-- > 0;) f = f * sizes[i] + idx[i];
    return f;
  }
};

OccupancyGrid occupancy(const Polyhedron& p) {
  OccupancyGrid g;
  if (p.rects.empty()) return g;
  std::size_t n = p.rects.front().dim();
  g.breaks.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Rational> b;
    for (const auto& r : p.rects) {
      b.push_back(r.lo[i]);
      b.push_back(r.hi[i]);
    }
    g.breaks[i] = sorted_unique(std::move(b));
    g.sizes.push_back(g.breaks[i].size() - 1);
  }
  std::size_t total = 1;
  for (auto s : g.sizes) total *= s;
  g.filled.assign(total, 0);
  for (const auto& r : p.rects) {
    std::vector<std::size_t> from(n), count(n);
    for (std::size_t i = 0; i < n; ++i) {
      from[i] = index_of(g.breaks[i], r.lo[i]);
      count[i] = index_of(g.breaks[i], r.hi[i]) - from[i];
    }
    for_each_index(count, [&](const std::vector<std::size_t>& off) {
      std::vector<std::size_t> idx(n);
      for (std::size_t i = 0; i < n; ++i) idx[i] = from[i] + off[i];
      g.filled[g.flat(idx)] = 1;
    });
  }
  return g;
}

std::vector<std::vector<Rational>> all_face_coords(const Polyhedron& p) {
  OccupancyGrid g = occupancy(p);
  std::size_t n = g.breaks.size();
  std::vector<std::vector<Rational>> faces(n);
  for (std::size_t axis = 0; axis < n; ++axis) {
    std::vector<char> is_face(g.breaks[axis].size(), 0);
    for_each_index(g.sizes, [&](const std::vector<std::size_t>& idx) {
      if (!g.filled[g.flat(idx)]) return;
      // Boundary below and above this cell along `axis`.
      auto nb = idx;
      if (idx[axis] == 0) {
        is_face[0] = 1;
      } else {
        nb[axis] = idx[axis] - 1;
        if (!g.filled[g.flat(nb)]) is_face[idx[axis]] = 1;
      }
      if (idx[axis] + 1 == g.sizes[axis]) {
        is_face[idx[axis] + 1] = 1;
      } else {
        nb[axis] = idx[axis] + 1;
        if (!g.filled[g.flat(nb)]) is_face[idx[axis] + 1] = 1;
      }
    });
    for (std::size_t k = 0; k < is_face.size(); ++k)
      if (is_face[k]) faces[axis].push_back(g.breaks[axis][k]);
  }
  return faces;
}

}  // namespace

std::vector<Rational> Polyhedron::face_coords(std::size_t axis) const {
  if (rects.empty()) return {};
  return all_face_coords(*this).at(axis);
}

RectLocator::RectLocator(const std::vector<Rect>& rects, std::size_t dim) : rects_(rects), dim_(dim) {
  if (rects.size() <= 64) return;
  std::vector<Rational> min_edges;
  for (const auto& r : rects) {
    Rational m = r.edge(0);
    for (std::size_t i = 1; i < dim; ++i) m = std::min(m, r.edge(i));
    min_edges.push_back(m);
  }
  std::nth_element(min_edges.begin(), min_edges.begin() + static_cast<std::ptrdiff_t>(min_edges.size() / 2),
                   min_edges.end());
  cell_ = min_edges[min_edges.size() / 2];
  for (std::size_t k = 0; k < rects.size(); ++k) {
    const Rect& r = rects[k];
    std::vector<long> from(dim), to(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      from[i] = floor_of(r.lo[i] / cell_).get_si();
      to[i] = Integer(ceil_of(r.hi[i] / cell_) - 1).get_si();
    }
    std::vector<long> key = from;
    for (;;) {
      buckets_[key].push_back(k);
      std::size_t i = 0;
      while (i < dim && key[i] == to[i]) {
        key[i] = from[i];
        ++i;
      }
      if (i == dim) break;
      ++key[i];
    }
  }
}

std::optional<std::size_t> RectLocator::locate(const RVec& x) const {
  if (buckets_.empty()) {
    for (std::size_t k = 0; k < rects_.size(); ++k)
      if (rects_[k].contains(x)) return k;
    return std::nullopt;
  }
  std::vector<long> key(dim_);
  for (std::size_t i = 0; i < dim_; ++i) key[i] = floor_of(x[i] / cell_).get_si();
  auto it = buckets_.find(key);
  if (it == buckets_.end()) return std::nullopt;
  for (auto k : it->second)
    if (rects_[k].contains(x)) return k;
  return std::nullopt;
}

std::size_t RegionPartition::region_count() const {
  std::size_t m = 0;
  for (auto r : region) m = std::max(m, r + 1);
  return m;
}

std::vector<std::size_t> RegionPartition::rects_of_region(std::size_t r) const {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < rects.size(); ++k)
    if (region[k] == r) out.push_back(k);
  return out;
}

PartitionAudit audit_partition(const RegionPartition& p) {
  PartitionAudit a;
  a.rect_count = p.rects.size();
  Rational total = 0;
  for (const auto& r : p.rects) {
    if (!r.inside(p.window)) a.inside_window = false;
    total += r.volume();
  }
  Rational window_volume = 1;
  for (std::size_t i = 0; i < p.window.dim(); ++i) window_volume *= p.window.edge(i);
  // Sweep along axis 0 for overlaps.
  std::vector<std::size_t> order(p.rects.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::sort(order.begin(), order.end(), [&](auto x, auto y) { return p.rects[x].lo[0] < p.rects[y].lo[0]; });
  std::vector<std::size_t> active;
  for (auto k : order) {
    const Rect& r = p.rects[k];
    std::erase_if(active, [&](std::size_t j) { return p.rects[j].hi[0] <= r.lo[0]; });
    for (auto j : active)
      if (p.rects[j].intersects(r)) {
        a.disjoint = false;
        if (a.overlapping.size() < 16) a.overlapping.emplace_back(std::min(j, k), std::max(j, k));
      }
    active.push_back(k);
  }
  // Disjoint rects inside the window with full total volume cover it.
  a.covers = a.disjoint && a.inside_window && total == window_volume;
  return a;
}

std::vector<Rational> boundary_coords(const RegionPartition& p, std::size_t axis) {
  std::vector<Rational> out;
  for (const auto& r : p.rects) {
    if (r.lo[axis] != p.window.lo[axis]) out.push_back(r.lo[axis]);
    if (r.hi[axis] != p.window.hi[axis]) out.push_back(r.hi[axis]);
  }
  return sorted_unique(std::move(out));
}

RegionConfig default_region_config(std::size_t n, const Rational& d, const Rational& epsilon) {
  if (!(d > 0) || !(epsilon > 0)) fail(ErrorCode::PreconditionViolated, "d and epsilon must be positive");
  RegionConfig c;
  c.d = d;
  c.epsilon = epsilon;
  c.D = d * Rational(ceil_of(d / epsilon));
  c.delta1 = Rational(20) * Rational(Integer(1) << static_cast<unsigned>(3 * n + 1)) * c.D;
  c.delta2 = 4 * c.delta1 + c.D;
  c.b = 1;
  c.separation = d / 50;
  return c;
}

void validate_config(const RegionConfig& c, std::size_t n) {
  auto bad = [](const std::string& what) { fail(ErrorCode::UnsatisfiableConstraints, "region config: " + what); };
  if (!(c.d > 0) || !(c.epsilon > 0)) bad("d and epsilon must be positive");
  if (c.epsilon > c.d) bad("epsilon " + to_string(c.epsilon) + " exceeds d " + to_string(c.d));
  Rational dmin = c.d * Rational(ceil_of(c.d / c.epsilon));
  if (c.D < dmin) bad("D = " + to_string(c.D) + " is below d*ceil(d/eps) = " + to_string(dmin));
  Rational needed = Rational(20) * Rational(Integer(1) << static_cast<unsigned>(3 * n + 1)) * c.D;
  if (c.delta1 < needed) bad("delta1 = " + to_string(c.delta1) + " is below 20*2^(3n+1)*D = " + to_string(needed));
  if (!(c.delta2 > 4 * c.delta1)) bad("delta2 must exceed 4*delta1");
  if (c.separation < 0) bad("separation must be non-negative");
}

Arrangement arrangement_of(std::vector<RVec> markers, std::vector<Rect> cubes) {
  Arrangement arr;
  arr.markers = std::move(markers);
  arr.cubes = std::move(cubes);
  if (arr.cubes.empty()) return arr;
  std::size_t n = arr.cubes.front().dim();
  std::vector<std::vector<Rational>> breaks(n);
  std::vector<std::size_t> sizes(n);
  // cover[i][k]: cubes whose axis-i range contains interval k.
  std::vector<std::vector<std::vector<std::size_t>>> cover(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Rational> b;
    for (const auto& c : arr.cubes) {
      b.push_back(c.lo[i]);
      b.push_back(c.hi[i]);
    }
    breaks[i] = sorted_unique(std::move(b));
    sizes[i] = breaks[i].size() - 1;
    cover[i].resize(sizes[i]);
    for (std::size_t c = 0; c < arr.cubes.size(); ++c) {
      std::size_t from = index_of(breaks[i], arr.cubes[c].lo[i]);
      std::size_t to = index_of(breaks[i], arr.cubes[c].hi[i]);
      for (std::size_t k = from; k < to; ++k) cover[i][k].push_back(c);
    }
  }
  std::map<std::vector<std::size_t>, std::size_t> atom_of;
  std::vector<std::size_t> members, scratch;
  for_each_index(sizes, [&](const std::vector<std::size_t>& idx) {
    members = cover[0][idx[0]];
    for (std::size_t i = 1; i < n && !members.empty(); ++i) {
      scratch.clear();
      const auto& other = cover[i][idx[i]];
      std::set_intersection(members.begin(), members.end(), other.begin(), other.end(), std::back_inserter(scratch));
      members.swap(scratch);
    }
    if (members.empty()) return;
    auto [it, fresh] = atom_of.try_emplace(members, arr.atoms.size());
    if (fresh) {
      arr.atoms.emplace_back();
      arr.membership.push_back(members);
    }
    Rect cell{RVec(n), RVec(n), 0};
    for (std::size_t i = 0; i < n; ++i) {
      cell.lo[i] = breaks[i][idx[i]];
      cell.hi[i] = breaks[i][idx[i] + 1];
    }
    auto& rects = arr.atoms[it->second].rects;
    cell.id = rects.size();
    rects.push_back(std::move(cell));
  });
  return arr;
}

Arrangement initial_rect_regions(const MarkerSet& markers, const Rational& delta1, const Window& window) {
  std::size_t n = window.dim();
  PointIndex index(n, delta1);
  for (std::size_t k = 0; k < markers.points.size(); ++k) {
    const RVec& m = markers.points[k];
    if (m.dim() != n) fail(ErrorCode::DimensionMismatch, "marker dimension differs from the window");
    auto close = index.within(m, delta1);
    if (!close.empty())
      fail(ErrorCode::MarkerPropertiesViolated, "markers " + std::to_string(close.front()) + " and " +
                                                    std::to_string(k) + " are within delta1 = " + to_string(delta1));
    index.insert(m, k);
  }
  RVec box_lo = window.lo, box_hi = window.hi;
  for (std::size_t i = 0; i < n; ++i) {
    box_lo[i] += delta1;
    box_hi[i] -= delta1;
  }
  bool has_interior = true;
  for (std::size_t i = 0; i < n; ++i) has_interior = has_interior && box_lo[i] <= box_hi[i];
  if (has_interior)
    if (auto hole = find_uncovered(box_lo, box_hi, markers.points, delta1))
      fail(ErrorCode::MarkerPropertiesViolated, "point " + to_string(*hole) + " is farther than delta1 from all markers");

  std::vector<Rect> cubes;
  for (std::size_t k = 0; k < markers.points.size(); ++k) {
    Rect c{markers.points[k], markers.points[k], k};
    for (std::size_t i = 0; i < n; ++i) {
      c.lo[i] -= delta1;
      c.hi[i] += delta1;
    }
    cubes.push_back(std::move(c));
  }
  return arrangement_of(markers.points, std::move(cubes));
}

std::vector<std::size_t> coloring(const std::vector<RVec>& markers, const Rational& delta2) {
  std::vector<std::size_t> color(markers.size(), 0);
  std::vector<std::size_t> rest(markers.size());
  for (std::size_t k = 0; k < rest.size(); ++k) rest[k] = k;
  for (std::size_t c = 0; !rest.empty(); ++c) {
    PointIndex index(markers.front().dim(), delta2);
    std::vector<std::size_t> left;
    for (auto k : rest) {
      if (index.any_within(markers[k], delta2)) {
        left.push_back(k);
        continue;
      }
      index.insert(markers[k], k);
      color[k] = c;
    }
    rest.swap(left);
  }
  return color;
}

FaceGapAudit audit_face_gaps(const Arrangement& adjusted, const std::vector<Rect>& original, const RegionConfig& cfg) {
  FaceGapAudit a;
  a.shift_budget = cfg.delta1 / 10;
  for (std::size_t k = 0; k < original.size() && k < adjusted.cubes.size(); ++k) {
    const Rect& o = original[k];
    const Rect& c = adjusted.cubes[k];
    for (std::size_t i = 0; i < o.dim(); ++i) {
      if (c.lo[i] > o.lo[i] || c.hi[i] < o.hi[i]) a.cubes_grow = false;
      a.max_shift = std::max({a.max_shift, Rational(o.lo[i] - c.lo[i]), Rational(c.hi[i] - o.hi[i])});
    }
  }
  for (const auto& atom : adjusted.atoms) {
    ++a.atoms_checked;
    auto faces = all_face_coords(atom);
    for (const auto& f : faces) {
      a.face_pairs_checked += f.size() * (f.size() - 1) / 2;
      for (std::size_t k = 0; k + 1 < f.size(); ++k) {
        Rational gap = f[k + 1] - f[k];
        if (!a.min_gap || gap < *a.min_gap) a.min_gap = gap;
        if (gap < cfg.D) ++a.violations;
      }
    }
  }
  return a;
}

AdjustedArrangement adjust_faces(const Arrangement& arr, const RegionConfig& cfg, const std::vector<std::size_t>& colors) {
  if (colors.size() != arr.cubes.size()) fail(ErrorCode::LengthMismatch, "one colour per cube is required");
  AdjustedArrangement out;
  out.original_cubes = arr.cubes;
  std::size_t count = arr.cubes.size();
  out.order.resize(count);
  for (std::size_t k = 0; k < count; ++k) out.order[k] = k;
  std::stable_sort(out.order.begin(), out.order.end(), [&](auto x, auto y) { return colors[x] < colors[y]; });

  Rational budget = cfg.delta1 / 10;
  Rational reach = 5 * cfg.delta1;
  std::vector<Rect> cubes = arr.cubes;
  std::vector<std::size_t> processed;
  std::size_t n = count ? cubes.front().dim() : 0;
  PointIndex near(n ? n : 1, reach);
  for (auto x : out.order) {
    auto neighbours = near.within(arr.markers[x], reach);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<Rational> parallel;
      for (auto y : neighbours) {
        parallel.push_back(cubes[y].lo[i]);
        parallel.push_back(cubes[y].hi[i]);
      }
      auto clear = [&](const Rational& c) {
        return std::all_of(parallel.begin(), parallel.end(), [&](const Rational& f) { return abs_of(c - f) >= cfg.D; });
      };
      for (int side : {-1, 1}) {
        Rational start = side < 0 ? arr.cubes[x].lo[i] : arr.cubes[x].hi[i];
        Rational shift = 0;
        while (!clear(start + side * shift)) {
          shift += 2 * cfg.D;
          if (shift > budget)
            fail(ErrorCode::InfeasibleShift, "face of cube " + std::to_string(x) + " on axis " + std::to_string(i) +
                                                 " needs a shift beyond delta1/10 = " + to_string(budget));
        }
        (side < 0 ? cubes[x].lo[i] : cubes[x].hi[i]) = start + side * shift;
      }
    }
    near.insert(arr.markers[x], x);
  }
  out.arrangement = arrangement_of(arr.markers, std::move(cubes));
  out.audit = audit_face_gaps(out.arrangement, out.original_cubes, cfg);
  return out;
}

std::vector<Rect> cut_polyhedron(const Polyhedron& p) {
  std::vector<Rect> out;
  if (p.rects.empty()) return out;
  auto faces = all_face_coords(p);
  std::size_t n = faces.size();
  std::vector<std::size_t> sizes(n);
  for (std::size_t i = 0; i < n; ++i) sizes[i] = faces[i].size() - 1;
  for_each_index(sizes, [&](const std::vector<std::size_t>& idx) {
    Rect box{RVec(n), RVec(n), 0};
    for (std::size_t i = 0; i < n; ++i) {
      box.lo[i] = faces[i][idx[i]];
      box.hi[i] = faces[i][idx[i] + 1];
    }
    if (!p.contains(box.center())) return;
    box.id = out.size();
    out.push_back(std::move(box));
  });
  return out;
}

Integer subdivision_count(const Rational& l, const Rational& d) {
  Integer k = floor_of(l / d);
  return k < 1 ? Integer(1) : k;
}

std::vector<Rect> subdivide_rect(const Rect& r, const Rational& d, const Rational& epsilon) {
  Rational need = d * Rational(ceil_of(d / epsilon));
  std::size_t n = r.dim();
  std::vector<std::size_t> sizes(n);
  std::vector<Rational> piece(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (r.edge(i) < need)
      fail(ErrorCode::EdgeTooShort,
           "edge " + to_string(r.edge(i)) + " on axis " + std::to_string(i) + " is below d*ceil(d/eps) = " + to_string(need));
    Integer k = subdivision_count(r.edge(i), d);
    if (!k.fits_ulong_p() || k > 10000000) fail(ErrorCode::PreconditionViolated, "subdivision too large to list");
    sizes[i] = k.get_ui();
    piece[i] = r.edge(i) / Rational(k);
  }
  std::vector<Rect> out;
  for_each_index(sizes, [&](const std::vector<std::size_t>& idx) {
    Rect s{RVec(n), RVec(n), out.size()};
    for (std::size_t i = 0; i < n; ++i) {
      s.lo[i] = r.lo[i] + piece[i] * static_cast<unsigned long>(idx[i]);
      s.hi[i] = idx[i] + 1 == sizes[i] ? r.hi[i] : Rational(s.lo[i] + piece[i]);
    }
    out.push_back(std::move(s));
  });
  return out;
}

SquarePartition::SquarePartition(Window window, RegionConfig cfg, std::vector<Rect> cut_rects, FaceGapAudit face_gaps,
                                 SquareStats stats)
    : window_(std::move(window)),
      cfg_(std::move(cfg)),
      cuts_(std::move(cut_rects)),
      face_gaps_(std::move(face_gaps)),
      stats_(std::move(stats)) {
  Rational need = cfg_.d * Rational(ceil_of(cfg_.d / cfg_.epsilon));
  for (auto& r : cuts_) {
    std::vector<Integer> k(r.dim());
    for (std::size_t i = 0; i < r.dim(); ++i) {
      if (r.edge(i) < need)
        fail(ErrorCode::EdgeTooShort, "cut rect edge " + to_string(r.edge(i)) + " is below d*ceil(d/eps)");
      k[i] = subdivision_count(r.edge(i), cfg_.d);
    }
    counts_.push_back(std::move(k));
  }
  for (std::size_t c = 0; c < cuts_.size(); ++c) cuts_[c].id = c;
  locator_ = RectLocator(cuts_, window_.dim());
}

Rational SquarePartition::piece_length(std::size_t cut, std::size_t axis) const {
  return cuts_[cut].edge(axis) / Rational(counts_[cut][axis]);
}

SquarePartition::Piece SquarePartition::locate(const RVec& x) const {
  auto c = locator_.locate(x);
  if (!c) fail(ErrorCode::PointOutsideSafeInterior, "point " + to_string(x) + " is not covered by the partition");
  Piece p{*c, std::vector<Integer>(x.dim())};
  for (std::size_t i = 0; i < x.dim(); ++i) p.index[i] = floor_of((x[i] - cuts_[*c].lo[i]) / piece_length(*c, i));
  return p;
}

Rect SquarePartition::piece_rect(const Piece& p) const {
  const Rect& c = cuts_.at(p.cut);
  Rect r{RVec(c.dim()), RVec(c.dim()), 0};
  for (std::size_t i = 0; i < c.dim(); ++i) {
    Rational len = piece_length(p.cut, i);
    r.lo[i] = c.lo[i] + len * Rational(p.index[i]);
    r.hi[i] = p.index[i] + 1 == counts_[p.cut][i] ? c.hi[i] : Rational(r.lo[i] + len);
  }
  return r;
}

std::vector<Rational> SquarePartition::face_coords(std::size_t axis, const Rational& lo, const Rational& hi) const {
  std::vector<Rational> out;
  for (std::size_t c = 0; c < cuts_.size(); ++c) {
    const Rect& r = cuts_[c];
    if (r.hi[axis] < lo || hi < r.lo[axis]) continue;
    Rational len = piece_length(c, axis);
    Integer from = std::max(Integer(0), ceil_of((lo - r.lo[axis]) / len));
    Integer to = std::min(counts_[c][axis], floor_of((hi - r.lo[axis]) / len));
    for (Integer m = from; m <= to; ++m) out.push_back(m == counts_[c][axis] ? r.hi[axis] : Rational(r.lo[axis] + len * Rational(m)));
  }
  return sorted_unique(std::move(out));
}

RegionPartition SquarePartition::materialize() const {
  RegionPartition out;
  out.window = window_;
  std::size_t n = window_.dim();
  for (std::size_t c = 0; c < cuts_.size(); ++c) {
    const Rect& r = cuts_[c];
    std::vector<Integer> from(n);
    std::vector<std::size_t> sizes(n);
    bool meets = true;
    for (std::size_t i = 0; i < n; ++i) {
      Rational len = piece_length(c, i);
      from[i] = std::max(Integer(0), floor_of((window_.lo[i] - r.lo[i]) / len));
      Integer to = std::min(Integer(counts_[c][i] - 1), Integer(ceil_of((window_.hi[i] - r.lo[i]) / len) - 1));
      if (to < from[i]) meets = false;
      else sizes[i] = Integer(to - from[i] + 1).get_ui();
    }
    if (!meets) continue;
    for_each_index(sizes, [&](const std::vector<std::size_t>& idx) {
      Piece p{c, std::vector<Integer>(n)};
      for (std::size_t i = 0; i < n; ++i) p.index[i] = from[i] + idx[i];
      auto clipped = piece_rect(p).clip(window_);
      if (!clipped) return;
      clipped->id = out.rects.size();
      out.region.push_back(out.rects.size());
      out.rects.push_back(std::move(*clipped));
    });
  }
  return out;
}

SquarePartition build_square_partition(const Window& window, const RegionConfig& cfg, std::uint64_t seed) {
  std::size_t n = window.dim();
  validate_config(cfg, n);
  // The cubes have half-width delta1, far beyond desk-scale windows, so the
  // markers live on an enlarged window whose interior covers this one.
  Window extended = window.expanded(4 * cfg.delta1);
  Rect target{window.lo, window.hi, 0};
  Rational window_volume = target.volume();
  constexpr std::size_t kAttempts = 8;
  for (std::size_t attempt = 0; attempt < kAttempts; ++attempt) {
    std::uint64_t s = attempt == 0 ? seed : mix_seed(seed, attempt);
    MarkerSet markers = build_marker_set(extended, cfg.delta1, s);
    Arrangement arr = initial_rect_regions(markers, cfg.delta1, extended);
    auto colors = coloring(markers.points, cfg.delta2);
    AdjustedArrangement adj = adjust_faces(arr, cfg, colors);
    if (!adj.audit.ok(cfg.D))
      fail(ErrorCode::AuditFailed, "face gaps: parallel faces closer than D or shift budget exceeded");

    // Half-open cubes can miss isolated boundary points that closed cubes
    // cover; such a marker set is rejected and redrawn.
    Rational covered = 0;
    std::vector<Rect> cuts;
    for (const auto& atom : adj.arrangement.atoms) {
      bool meets = false;
      for (const auto& r : atom.rects)
        if (r.intersects(target)) {
          meets = true;
          if (auto c = r.clip(window)) covered += c->volume();
        }
      if (!meets) continue;
      for (auto& r : cut_polyhedron(atom))
        if (r.intersects(target)) cuts.push_back(std::move(r));
    }
    if (covered != window_volume) continue;

    std::sort(cuts.begin(), cuts.end(), [](const Rect& a, const Rect& b) {
      for (std::size_t i = a.dim(); i-- > 0;)
        if (a.lo[i] != b.lo[i]) return a.lo[i] < b.lo[i];
      return false;
    });
    SquareStats stats;
    stats.markers = markers.points.size();
    stats.colors = colors.empty() ? 0 : *std::max_element(colors.begin(), colors.end()) + 1;
    stats.atoms = adj.arrangement.atoms.size();
    stats.cut_rects = cuts.size();
    stats.marker_attempts = attempt + 1;
    stats.max_shift = adj.audit.max_shift;
    return SquarePartition(window, cfg, std::move(cuts), adj.audit, stats);
  }
  fail(ErrorCode::AuditFailed, "could not cover the window with half-open marker cubes");
}

ShiftedGrid::ShiftedGrid(RVec offset, Rational d, Rational s, FaceOracle existing)
    : offset_(std::move(offset)), d_(std::move(d)), s_(std::move(s)), existing_(std::move(existing)), cache_(offset_.dim()) {
  if (!(d_ > 0)) fail(ErrorCode::PreconditionViolated, "grid scale must be positive");
  if (!(s_ > 0)) fail(ErrorCode::PreconditionViolated, "separation must be positive");
}

Rational ShiftedGrid::base(std::size_t axis, const Integer& k) const { return offset_[axis] + 10 * d_ * Rational(k); }

Rational ShiftedGrid::face(std::size_t axis, const Integer& k) const {
  auto& memo = cache_.at(axis);
  if (auto it = memo.find(k); it != memo.end()) return it->second;
  Rational b = base(axis, k);
  Rational limit = d_ / 2;
  std::vector<Rational> blocking;
  if (existing_) blocking = existing_(axis, b - limit - s_, b + limit + s_);
  auto admissible = [&](const Rational& c) {
    return std::all_of(blocking.begin(), blocking.end(), [&](const Rational& f) { return abs_of(c - f) > s_; });
  };
  for (Integer j = 0;; ++j) {
    Rational mag = 2 * s_ * Rational((j + 1) / 2);
    if (mag > limit) break;
    Rational c = j % 2 == 1 ? Rational(b + mag) : Rational(b - mag);
    if (admissible(c)) {
      memo.emplace(k, c);
      return c;
    }
  }
  std::string list;
  for (std::size_t i = 0; i < blocking.size() && i < 8; ++i) list += (i ? ", " : "") + to_string(blocking[i]);
  fail(ErrorCode::SeparationInfeasible, "no admissible shift for grid face " + k.get_str() + " on axis " +
                                            std::to_string(axis) + " at " + to_string(b) + "; blocking faces: " + list);
}

std::vector<Integer> ShiftedGrid::cell_index(const RVec& x) const {
  std::vector<Integer> idx(dim());
  for (std::size_t i = 0; i < dim(); ++i) {
    Integer k = floor_of((x[i] - offset_[i]) / (10 * d_));
    while (x[i] < face(i, k)) --k;
    while (x[i] >= face(i, k + 1)) ++k;
    idx[i] = k;
  }
  return idx;
}

Rect ShiftedGrid::cell(const std::vector<Integer>& index) const {
  Rect r{RVec(dim()), RVec(dim()), 0};
  for (std::size_t i = 0; i < dim(); ++i) {
    r.lo[i] = face(i, index[i]);
    r.hi[i] = face(i, index[i] + 1);
  }
  return r;
}

std::vector<Integer> ShiftedGrid::faces_in(std::size_t axis, const Rational& lo, const Rational& hi) const {
  std::vector<Integer> out;
  Integer from = floor_of((lo - offset_[axis] - d_) / (10 * d_));
  Integer to = ceil_of((hi - offset_[axis] + d_) / (10 * d_));
  for (Integer k = from; k <= to; ++k) {
    Rational c = face(axis, k);
    if (lo <= c && c <= hi) out.push_back(k);
  }
  return out;
}

RVec grid_offset(std::size_t n, const Rational& d, std::uint64_t seed) {
  std::mt19937_64 rng(mix_seed(seed, "grid-offset"));
  RVec o(n);
  for (std::size_t i = 0; i < n; ++i) o[i] = 10 * d * make_rational(static_cast<long>(rng() >> 40), 1L << 24);
  return o;
}

FaceOracle faces_of(const std::vector<RegionPartition>& partitions) {
  std::size_t n = partitions.empty() ? 0 : partitions.front().window.dim();
  auto coords = std::make_shared<std::vector<std::vector<Rational>>>(n);
  for (const auto& p : partitions) {
    if (p.window.dim() != n) fail(ErrorCode::DimensionMismatch, "existing partitions differ in dimension");
    for (std::size_t i = 0; i < n; ++i) {
      auto c = boundary_coords(p, i);
      (*coords)[i].insert((*coords)[i].end(), c.begin(), c.end());
    }
  }
  for (auto& c : *coords) c = sorted_unique(std::move(c));
  return [coords](std::size_t axis, const Rational& lo, const Rational& hi) {
    std::vector<Rational> out;
    if (axis >= coords->size()) return out;
    const auto& c = (*coords)[axis];
    for (auto it = std::lower_bound(c.begin(), c.end(), lo); it != c.end() && *it <= hi; ++it) out.push_back(*it);
    return out;
  };
}

OrthogonalResult orthogonal_partition(const Window& window, const std::vector<RegionPartition>& existing,
                                      const Rational& d, std::size_t b, const RegionConfig& cfg, std::uint64_t seed) {
  std::size_t n = window.dim();
  std::size_t contributing = 0;
  for (const auto& p : existing) {
    if (p.window.dim() != n) fail(ErrorCode::DimensionMismatch, "existing partition has another dimension");
    bool any = false;
    for (std::size_t i = 0; i < n && !any; ++i) any = !boundary_coords(p, i).empty();
    contributing += any ? 1 : 0;
  }
  if (contributing > b)
    fail(ErrorCode::PreconditionViolated, std::to_string(contributing) + " existing partitions have faces in the window, more than b = " +
                                              std::to_string(b));
  ShiftedGrid grid(grid_offset(n, d, seed), d, cfg.separation, faces_of(existing));

  RegionPartition out;
  out.window = window;
  auto first = grid.cell_index(window.lo);
  std::vector<std::size_t> sizes(n);
  for (std::size_t i = 0; i < n; ++i) {
    Integer k = first[i];
    while (grid.face(i, k + 1) < window.hi[i]) ++k;
    sizes[i] = Integer(k - first[i] + 1).get_ui();
  }
  for_each_index(sizes, [&](const std::vector<std::size_t>& off) {
    std::vector<Integer> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = first[i] + off[i];
    auto r = grid.cell(idx).clip(window);
    if (!r) return;
    r->id = out.rects.size();
    out.region.push_back(out.rects.size());
    out.rects.push_back(std::move(*r));
  });
  return {std::move(out), std::move(grid)};
}

SeparationAudit audit_separation(const RegionPartition& fresh, const std::vector<RegionPartition>& existing,
                                 const Rational& s) {
  SeparationAudit a;
  for (std::size_t i = 0; i < fresh.window.dim(); ++i) {
    auto mine = boundary_coords(fresh, i);
    for (const auto& p : existing) {
      auto theirs = boundary_coords(p, i);
      for (const auto& x : mine)
        for (const auto& y : theirs) {
          ++a.pairs_checked;
          Rational dist = abs_of(x - y);
          if (!a.min_distance || dist < *a.min_distance) a.min_distance = dist;
          if (dist <= s) ++a.violations;
        }
    }
  }
  return a;
}

EdgeAudit audit_edges(const RegionPartition& p, const Rational& lo, const Rational& hi, bool closed_hi) {
  EdgeAudit a;
  for (const auto& r : p.rects) {
    bool interior = true;
    for (std::size_t i = 0; i < r.dim() && interior; ++i)
      interior = r.lo[i] > p.window.lo[i] && r.hi[i] < p.window.hi[i];
    if (!interior) continue;
    ++a.interior_rects;
    bool bad = false;
    for (std::size_t i = 0; i < r.dim(); ++i) {
      Rational e = r.edge(i);
      if (!a.min_edge || e < *a.min_edge) a.min_edge = e;
      if (!a.max_edge || e > *a.max_edge) a.max_edge = e;
      if (e < lo || (closed_hi ? e > hi : e >= hi)) bad = true;
    }
    if (bad) ++a.violations;
  }
  return a;
}

void to_json(json& j, const Rect& r) { j = json{{"id", r.id}, {"lo", r.lo}, {"hi", r.hi}}; }

void from_json(const json& j, Rect& r) {
  r.id = j.value("id", std::size_t{0});
  r.lo = j.at("lo").get<RVec>();
  r.hi = j.at("hi").get<RVec>();
}

void to_json(json& j, const RegionPartition& p) {
  json rects = json::array();
  for (std::size_t k = 0; k < p.rects.size(); ++k) {
    json r = p.rects[k];
    if (p.region[k] != k) r["region"] = p.region[k];
    rects.push_back(std::move(r));
  }
  j = json{{"window", p.window}, {"rects", rects}};
}

void from_json(const json& j, RegionPartition& p) {
  p.window = j.at("window").get<Window>();
  p.rects.clear();
  p.region.clear();
  for (const auto& r : j.at("rects")) {
    p.region.push_back(r.value("region", p.rects.size()));
    p.rects.push_back(r.get<Rect>());
  }
}

void to_json(json& j, const RegionConfig& c) {
  j = json{{"d", c.d},           {"epsilon", c.epsilon}, {"D", c.D}, {"delta1", c.delta1},
           {"delta2", c.delta2}, {"b", c.b},             {"separation", c.separation}};
}

void from_json(const json& j, RegionConfig& c) {
  c.d = j.at("d").get<Rational>();
  c.epsilon = j.at("epsilon").get<Rational>();
  c.D = j.at("D").get<Rational>();
  c.delta1 = j.at("delta1").get<Rational>();
  c.delta2 = j.at("delta2").get<Rational>();
  c.b = j.value("b", std::size_t{1});
  c.separation = j.at("separation").get<Rational>();
}

namespace {
json optional_rational(const std::optional<Rational>& q) { return q ? json(*q) : json(nullptr); }
}  // namespace

void to_json(json& j, const FaceGapAudit& a) {
  j = json{{"atoms_checked", a.atoms_checked}, {"face_pairs_checked", a.face_pairs_checked},
           {"violations", a.violations},       {"min_gap", optional_rational(a.min_gap)},
           {"max_shift", a.max_shift},         {"shift_budget", a.shift_budget},
           {"cubes_grow", a.cubes_grow}};
}

void to_json(json& j, const PartitionAudit& a) {
  json pairs = json::array();
  for (auto [x, y] : a.overlapping) pairs.push_back({x, y});
  j = json{{"disjoint", a.disjoint}, {"inside_window", a.inside_window}, {"covers", a.covers},
           {"rect_count", a.rect_count}, {"overlapping", pairs}};
}

void to_json(json& j, const SeparationAudit& a) {
  j = json{{"pairs_checked", a.pairs_checked}, {"violations", a.violations},
           {"min_distance", optional_rational(a.min_distance)}};
}

void to_json(json& j, const EdgeAudit& a) {
  j = json{{"interior_rects", a.interior_rects}, {"violations", a.violations},
           {"min_edge", optional_rational(a.min_edge)}, {"max_edge", optional_rational(a.max_edge)}};
}

}  // namespace orbitred
