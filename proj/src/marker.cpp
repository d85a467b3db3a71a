#include "orbitred/marker.hpp"

#include <algorithm>
#include <random>
#include <string>

#include "orbitred/error.hpp"

namespace orbitred {

Window::Window(RVec lo_, RVec hi_) : lo(std::move(lo_)), hi(std::move(hi_)) {
  if (lo.dim() != hi.dim()) fail(ErrorCode::DimensionMismatch, "window corners have different dimensions");
  for (std::size_t i = 0; i < lo.dim(); ++i)
    if (!(lo[i] < hi[i]))
      fail(ErrorCode::PreconditionViolated, "window needs lo < hi on every axis, axis " + std::to_string(i));
}

Window Window::cube(std::size_t n, const Rational& lo, const Rational& hi) {
  RVec a(n), b(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = lo;
    b[i] = hi;
  }
  return Window(a, b);
}

bool Window::contains(const RVec& x) const {
  if (x.dim() != dim()) return false;
  for (std::size_t i = 0; i < dim(); ++i)
    if (x[i] < lo[i] || x[i] >= hi[i]) return false;
  return true;
}

bool Window::in_interior(const RVec& x, const Rational& margin) const {
  if (x.dim() != dim()) return false;
  for (std::size_t i = 0; i < dim(); ++i)
    if (x[i] - lo[i] < margin || hi[i] - x[i] < margin) return false;
  return true;
}

Window Window::expanded(const Rational& r) const {
  RVec a = lo, b = hi;
  for (std::size_t i = 0; i < dim(); ++i) {
    a[i] -= r;
    b[i] += r;
  }
  return Window(a, b);
}

PointIndex::PointIndex(std::size_t dim, Rational cell) : dim_(dim), cell_(std::move(cell)) {
  if (cell_ <= 0) fail(ErrorCode::PreconditionViolated, "index cell size must be positive");
}

std::size_t PointIndex::KeyHash::operator()(const std::vector<long>& k) const noexcept {
  std::uint64_t h = 1469598103934665603ULL;
  for (long x : k) {
    h ^= static_cast<std::uint64_t>(x);
    h *= 1099511628211ULL;
  }
  return static_cast<std::size_t>(h);
}

std::vector<long> PointIndex::key(const RVec& p) const {
  std::vector<long> k(dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    Integer f = floor_of(p[i] / cell_);
    if (!f.fits_slong_p()) fail(ErrorCode::PreconditionViolated, "coordinate too large for the point index");
    k[i] = f.get_si();
  }
  return k;
}

template <typename F>
bool PointIndex::scan(const RVec& p, const Rational& r, F&& visit) const {
  auto base = key(p);
  Integer reach_z = ceil_of(r / cell_);
  long reach = reach_z.get_si();
  std::vector<Rational> lo(dim_), hi(dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    lo[i] = p[i] - r;
    hi[i] = p[i] + r;
  }
  auto close = [&](const RVec& q) {
    for (std::size_t i = 0; i < dim_; ++i)
      if (q[i] < lo[i] || hi[i] < q[i]) return false;
    return true;
  };
  std::vector<long> offset(dim_, -reach);
  std::vector<long> k(dim_);
  for (;;) {
    for (std::size_t i = 0; i < dim_; ++i) k[i] = base[i] + offset[i];
    auto it = buckets_.find(k);
    if (it != buckets_.end())
      for (const auto& [id, q] : it->second)
        if (close(q) && visit(id)) return true;
    std::size_t i = 0;
    while (i < dim_ && offset[i] == reach) offset[i++] = -reach;
    if (i == dim_) return false;
    ++offset[i];
  }
}

void PointIndex::insert(const RVec& p, std::size_t id) { buckets_[key(p)].emplace_back(id, p); }

std::vector<std::size_t> PointIndex::within(const RVec& p, const Rational& r) const {
  std::vector<std::size_t> out;
  scan(p, r, [&](std::size_t id) {
    out.push_back(id);
    return false;
  });
  std::sort(out.begin(), out.end());
  return out;
}

bool PointIndex::any_within(const RVec& p, const Rational& r) const {
  return scan(p, r, [](std::size_t) { return true; });
}

std::vector<RVec> greedy_discrete(const std::vector<RVec>& points, const Rational& d) {
  std::vector<RVec> kept;
  if (points.empty()) return kept;
  PointIndex index(points.front().dim(), d > 0 ? d : Rational(1));
  for (const auto& p : points) {
    if (index.any_within(p, d)) continue;
    index.insert(p, kept.size());
    kept.push_back(p);
  }
  return kept;
}

namespace {

constexpr unsigned kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

Rational van_der_corput(std::uint64_t i, unsigned base) {
  // Digit reversal in machine integers; exact while base^digits fits.
  unsigned long num = 0, den = 1;
  while (i > 0) {
    num = num * base + i % base;
    den *= base;
    i /= base;
  }
  Rational out(num, den);
  out.canonicalize();
  return out;
}

struct Cube {
  std::vector<Rational> lo, hi;  // closed [m - d, m + d] per axis
};

// Centres of the uncovered cells of the marker-cube arrangement inside a
// closed box, axis by axis. Stops after `limit` results.
void collect_uncovered(std::size_t axis, const RVec& box_lo, const RVec& box_hi, const std::vector<const Cube*>& cubes,
                       RVec& point, std::vector<RVec>& out, std::size_t limit) {
  std::size_t n = box_lo.dim();
  const Rational& a = box_lo[axis];
  const Rational& b = box_hi[axis];
  std::vector<const Rational*> breaks{&a, &b};
  for (const Cube* c : cubes) {
    if (a < c->lo[axis] && c->lo[axis] < b) breaks.push_back(&c->lo[axis]);
    if (a < c->hi[axis] && c->hi[axis] < b) breaks.push_back(&c->hi[axis]);
  }
  std::sort(breaks.begin(), breaks.end(), [](const Rational* x, const Rational* y) { return *x < *y; });
  breaks.erase(std::unique(breaks.begin(), breaks.end(), [](const Rational* x, const Rational* y) { return *x == *y; }),
               breaks.end());

  std::vector<const Cube*> active;
  auto handle_cell = [&](const Rational& cell_lo, const Rational& cell_hi) {
    active.clear();
    for (const Cube* c : cubes)
      if (c->lo[axis] <= cell_lo && cell_hi <= c->hi[axis]) active.push_back(c);
    point[axis] = (cell_lo + cell_hi) / 2;
    if (active.empty()) {
      // Every remaining axis is uncovered too; use the box centre there.
      RVec p = point;
      for (std::size_t k = axis + 1; k < n; ++k) p[k] = (box_lo[k] + box_hi[k]) / 2;
      out.push_back(p);
      return;
    }
    if (axis + 1 < n) {
      auto next = active;
      collect_uncovered(axis + 1, box_lo, box_hi, next, point, out, limit);
    }
  };

  if (breaks.size() == 1) {
    handle_cell(a, a);
    return;
  }
  for (std::size_t i = 0; i + 1 < breaks.size() && out.size() < limit; ++i) handle_cell(*breaks[i], *breaks[i + 1]);
}

std::vector<RVec> uncovered_cells(const RVec& box_lo, const RVec& box_hi, const std::vector<RVec>& markers,
                                  const Rational& d, std::size_t limit) {
  std::size_t n = box_lo.dim();
  std::vector<Cube> cubes;
  for (const auto& m : markers) {
    Cube c{std::vector<Rational>(n), std::vector<Rational>(n)};
    bool meets = true;
    for (std::size_t i = 0; i < n && meets; ++i) {
      c.lo[i] = m[i] - d;
      c.hi[i] = m[i] + d;
      meets = c.lo[i] <= box_hi[i] && box_lo[i] <= c.hi[i];
    }
    if (meets) cubes.push_back(std::move(c));
  }
  std::vector<const Cube*> ptrs;
  for (const auto& c : cubes) ptrs.push_back(&c);
  std::vector<RVec> out;
  RVec point(n);
  collect_uncovered(0, box_lo, box_hi, ptrs, point, out, limit);
  return out;
}

}  // namespace

HaltonSequence::HaltonSequence(const Window& window, std::uint64_t seed) : window_(window), index_(1) {
  if (window.dim() > std::size(kPrimes))
    fail(ErrorCode::UnsupportedDimension, "Halton sequence supports at most 12 dimensions");
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < window.dim(); ++i) shift_.push_back(make_rational(static_cast<long>(rng() >> 34), 1L << 30));
  index_ += rng() % 4096;
}

RVec HaltonSequence::next() {
  RVec p(window_.dim());
  for (std::size_t i = 0; i < window_.dim(); ++i) {
    Rational u = frac(van_der_corput(index_, kPrimes[i]) + shift_[i]);
    p[i] = window_.lo[i] + u * window_.edge(i);
  }
  ++index_;
  return p;
}

std::optional<RVec> find_uncovered(const RVec& box_lo, const RVec& box_hi, const std::vector<RVec>& markers,
                                   const Rational& d) {
  auto cells = uncovered_cells(box_lo, box_hi, markers, d, 1);
  if (cells.empty()) return std::nullopt;
  return cells.front();
}

MarkerSet build_marker_set(const Window& window, const Rational& d, std::uint64_t seed, MarkerBuildStats* stats) {
  if (d <= 0) fail(ErrorCode::PreconditionViolated, "marker distance must be positive");
  std::size_t n = window.dim();
  Rational cells_per_d = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (window.edge(i) < 2 * d)
      fail(ErrorCode::WindowTooSmall, "window edge " + to_string(window.edge(i)) + " on axis " + std::to_string(i) +
                                          " is shorter than 2d = " + to_string(2 * d));
    cells_per_d *= ceil_of(window.edge(i) / d);
  }
  MarkerBuildStats local;
  MarkerBuildStats& st = stats ? *stats : local;

  MarkerSet out{d, {}};
  PointIndex index(n, d);
  auto offer = [&](const RVec& p) {
    if (index.any_within(p, d)) return false;
    index.insert(p, out.points.size());
    out.points.push_back(p);
    return true;
  };

  // Dense pass: a few candidates per d-cell, in sequence order.
  HaltonSequence seq(window, seed);
  std::size_t budget = 4 * static_cast<std::size_t>(cells_per_d.get_num().get_ui()) + 16;
  for (std::size_t i = 0; i < budget; ++i) {
    ++st.candidates;
    if (offer(seq.next())) ++st.from_sequence;
  }

  // Exact completion on the interior box.
  RVec box_lo = window.lo, box_hi = window.hi;
  for (std::size_t i = 0; i < n; ++i) {
    box_lo[i] += d;
    box_hi[i] -= d;
  }
  for (;;) {
    auto holes = uncovered_cells(box_lo, box_hi, out.points, d, 4096);
    if (holes.empty()) break;
    for (const auto& h : holes)
      if (offer(h)) ++st.hole_fills;
  }
  return out;
}

MarkerReport verify_marker(const Window& window, const MarkerSet& markers) {
  MarkerReport r;
  constexpr std::size_t kWitnessCap = 16;
  const Rational& d = markers.d;
  std::size_t n = window.dim();
  std::size_t count = markers.points.size();
  r.pairs_checked = count * (count > 0 ? count - 1 : 0) / 2;
  for (std::size_t i = 0; i < count; ++i)
    for (std::size_t j = i + 1; j < count; ++j)
      if (sup_distance(markers.points[i], markers.points[j]) <= d) {
        ++r.discreteness_violations;
        if (r.close_pairs.size() < kWitnessCap) r.close_pairs.emplace_back(i, j);
      }
  r.discrete = r.discreteness_violations == 0;

  PointIndex index(n, d);
  for (std::size_t i = 0; i < count; ++i) index.insert(markers.points[i], i);
  Rational step = d / 2;
  std::vector<Integer> first(n), last(n);
  for (std::size_t i = 0; i < n; ++i) {
    first[i] = ceil_of(d / step);
    last[i] = floor_of((window.edge(i) - d) / step);
    if (first[i] > last[i]) return r;
  }
  std::vector<Integer> k = first;
  RVec p(n);
  for (;;) {
    for (std::size_t i = 0; i < n; ++i) p[i] = window.lo[i] + Rational(k[i]) * step;
    ++r.audit_points;
    if (!index.any_within(p, d)) {
      ++r.covering_violations;
      if (r.uncovered.size() < kWitnessCap) r.uncovered.push_back(p);
    }
    std::size_t i = 0;
    while (i < n && k[i] == last[i]) {
      k[i] = first[i];
      ++i;
    }
    if (i == n) break;
    ++k[i];
  }
  r.covering = r.covering_violations == 0;
  return r;
}

void to_json(json& j, const Window& w) { j = json{{"lo", w.lo}, {"hi", w.hi}}; }

void from_json(const json& j, Window& w) { w = Window(j.at("lo").get<RVec>(), j.at("hi").get<RVec>()); }

void to_json(json& j, const MarkerSet& m) { j = json{{"d", m.d}, {"points", m.points}}; }

void from_json(const json& j, MarkerSet& m) {
  m.d = j.at("d").get<Rational>();
  m.points = j.at("points").get<std::vector<RVec>>();
}

void to_json(json& j, const MarkerReport& r) {
  json pairs = json::array();
  for (auto [a, b] : r.close_pairs) pairs.push_back({a, b});
  j = json{{"discrete", r.discrete},
           {"covering", r.covering},
           {"pairs_checked", r.pairs_checked},
           {"audit_points", r.audit_points},
           {"discreteness_violations", r.discreteness_violations},
           {"covering_violations", r.covering_violations},
           {"close_pairs", pairs},
           {"uncovered", r.uncovered}};
}

}  // namespace orbitred
